#pragma once

// Umbrella header for the hurstlab toolkit.

#include "hurstlab/backtest.hpp"
#include "hurstlab/cli.hpp"
#include "hurstlab/dates.hpp"
#include "hurstlab/hurst.hpp"
#include "hurstlab/indicators.hpp"
#include "hurstlab/marketdata.hpp"
#include "hurstlab/parallel.hpp"
#include "hurstlab/qlearn.hpp"
#include "hurstlab/qlearn_json.hpp"
#include "hurstlab/rng.hpp"
#include "hurstlab/selector.hpp"
#include "hurstlab/stats.hpp"
#include "hurstlab/version.hpp"
