#pragma once

// Convenience header pulling in the whole library.

#include "errors.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "erosion.hpp"
#include "gpd.hpp"
#include "subgrad.hpp"
#include "sampling.hpp"
#include "optimize.hpp"
#include "oracle.hpp"
#include "io.hpp"
