#pragma once

#include "lemfact/abelian.hpp"
#include "lemfact/arith.hpp"
#include "lemfact/checked.hpp"
#include "lemfact/classgroup.hpp"
#include "lemfact/classical.hpp"
#include "lemfact/cocycle.hpp"
#include "lemfact/embedding.hpp"
#include "lemfact/error.hpp"
#include "lemfact/io.hpp"
#include "lemfact/parallel.hpp"
#include "lemfact/presets.hpp"
#include "lemfact/survey.hpp"
