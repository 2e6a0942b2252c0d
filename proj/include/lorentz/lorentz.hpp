// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "lorentz/cf_farey.hpp"
#include "lorentz/error.hpp"
#include "lorentz/freepath.hpp"
#include "lorentz/geometry.hpp"
#include "lorentz/markov.hpp"
#include "lorentz/parallel.hpp"
#include "lorentz/patterns.hpp"
#include "lorentz/poisson.hpp"
#include "lorentz/random.hpp"
#include "lorentz/stats.hpp"
