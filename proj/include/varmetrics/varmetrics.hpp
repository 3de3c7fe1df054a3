#pragma once

// Umbrella header pulling in the whole library.

#include "asymptotics.hpp"
#include "calibration.hpp"
#include "distributions.hpp"
#include "marketdata.hpp"
#include "montecarlo.hpp"
#include "quadrature.hpp"
#include "risk_measures.hpp"
#include "rng.hpp"
#include "roots.hpp"
#include "sample_stats.hpp"
#include "special_functions.hpp"
#include "table1.hpp"
#include "variability.hpp"
