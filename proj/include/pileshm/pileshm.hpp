#pragma once

// Umbrella header for the population-based SHM pipeline library.

#include "pileshm/anomaly.hpp"
#include "pileshm/beam_fem.hpp"
#include "pileshm/common.hpp"
#include "pileshm/diagnostics.hpp"
#include "pileshm/hier_model.hpp"
#include "pileshm/hiermc.hpp"
#include "pileshm/io.hpp"
#include "pileshm/nuts.hpp"
#include "pileshm/popgen.hpp"
#include "pileshm/rng.hpp"
#include "pileshm/signals.hpp"
#include "pileshm/surrogate.hpp"
