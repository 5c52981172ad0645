#pragma once

#include "ball_cover.hpp"
#include "convex_solvers.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "level_polytope.hpp"
#include "lp.hpp"
#include "oracle.hpp"
#include "pipeline.hpp"
#include "rng.hpp"
#include "ssp.hpp"
#include "svg.hpp"
