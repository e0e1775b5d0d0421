// Umbrella header.

#pragma once

#include "mllam/adapt.hpp"
#include "mllam/harness.hpp"
#include "mllam/init.hpp"
#include "mllam/io.hpp"
#include "mllam/metrics.hpp"
#include "mllam/model.hpp"
#include "mllam/rng.hpp"
#include "mllam/solvers.hpp"
