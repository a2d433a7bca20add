#pragma once

// Laplacian smoothing on kernel neighborhood graphs: estimation, spectral
// goodness-of-fit testing, and the experiment harness around them.

#include "lapsmooth/common.hpp"
#include "lapsmooth/csv.hpp"
#include "lapsmooth/estimator.hpp"
#include "lapsmooth/experiments.hpp"
#include "lapsmooth/gof.hpp"
#include "lapsmooth/graph.hpp"
#include "lapsmooth/kdtree.hpp"
#include "lapsmooth/kernel.hpp"
#include "lapsmooth/parallel.hpp"
#include "lapsmooth/quadrature.hpp"
#include "lapsmooth/rng.hpp"
#include "lapsmooth/slope.hpp"
#include "lapsmooth/solver.hpp"
#include "lapsmooth/spectrum.hpp"
#include "lapsmooth/synthetic.hpp"
