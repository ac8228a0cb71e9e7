#pragma once
// Umbrella header.

#include "ctm/bigint.hpp"
#include "ctm/bounds.hpp"
#include "ctm/codec.hpp"
#include "ctm/counts.hpp"
#include "ctm/dyadic.hpp"
#include "ctm/explore.hpp"
#include "ctm/machine.hpp"
#include "ctm/measure.hpp"
#include "ctm/plan.hpp"
#include "ctm/simulate.hpp"
#include "ctm/version.hpp"
