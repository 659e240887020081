#pragma once
// Convenience header for the whole numerical core.

#include "bessel.hpp"
#include "beta_table.hpp"
#include "cp.hpp"
#include "curvature.hpp"
#include "materials.hpp"
#include "spectral.hpp"
#include "sphere.hpp"
