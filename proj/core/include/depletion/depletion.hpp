#pragma once

// Umbrella header.
#include "depletion/applications.hpp"
#include "depletion/checks.hpp"
#include "depletion/dp.hpp"
#include "depletion/errors.hpp"
#include "depletion/instance.hpp"
#include "depletion/io.hpp"
#include "depletion/model.hpp"
#include "depletion/policy.hpp"
#include "depletion/random.hpp"
#include "depletion/simulator.hpp"
