#pragma once

#include "rlab/errors.hpp"
#include "rlab/numeric.hpp"
#include "rlab/rng.hpp"
#include "rlab/quadrature.hpp"
#include "rlab/rearrangement.hpp"
#include "rlab/weights.hpp"
#include "rlab/quasinorms.hpp"
#include "rlab/separation.hpp"
#include "rlab/superadditivity.hpp"
#include "rlab/radial.hpp"
#include "rlab/dilation.hpp"
