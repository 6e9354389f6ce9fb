#pragma once

// Umbrella header.

#include "cmab/core.hpp"
#include "cmab/rng.hpp"
#include "cmab/env.hpp"
#include "cmab/algo.hpp"
#include "cmab/ledger.hpp"
#include "cmab/attack/config.hpp"
#include "cmab/attack/planning.hpp"
#include "cmab/attack/gamma.hpp"
#include "cmab/attack/lta.hpp"
#include "cmab/attack/bounds.hpp"
#include "cmab/attack/attackers.hpp"
#include "cmab/metrics.hpp"
#include "cmab/harness.hpp"
