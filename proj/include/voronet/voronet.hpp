#pragma once

// Umbrella header.

#include "voronet/analysis.hpp"
#include "voronet/box.hpp"
#include "voronet/csv.hpp"
#include "voronet/model_io.hpp"
#include "voronet/network.hpp"
#include "voronet/oracle.hpp"
#include "voronet/parallel.hpp"
#include "voronet/rng.hpp"
#include "voronet/sample_set.hpp"
#include "voronet/test_functions.hpp"
