#pragma once

// Umbrella header: steady-state occupancies and thermal-noise routing for
// cascaded two-mode bosonic networks and their optomechanical realization.

#include "thermoroute/analysis.hpp"
#include "thermoroute/config.hpp"
#include "thermoroute/constants.hpp"
#include "thermoroute/dynamics.hpp"
#include "thermoroute/io.hpp"
#include "thermoroute/model.hpp"
#include "thermoroute/optomech.hpp"
#include "thermoroute/verify.hpp"
#include "thermoroute/version.hpp"
