#pragma once
// Umbrella header for the DCTIF tanh-approximation library.

#include "analysis.hpp"
#include "coeffgen.hpp"
#include "datasets.hpp"
#include "fixedpoint.hpp"
#include "hwmodel.hpp"
#include "io.hpp"
#include "nn.hpp"
#include "presets.hpp"
#include "regions.hpp"
