#pragma once

// Umbrella header for the library.

#include "gausson/errors.hpp"
#include "gausson/fft.hpp"
#include "gausson/fit.hpp"
#include "gausson/functionals.hpp"
#include "gausson/gausson_profile.hpp"
#include "gausson/grid.hpp"
#include "gausson/invariances.hpp"
#include "gausson/nehari.hpp"
#include "gausson/params.hpp"
#include "gausson/spectral.hpp"
#include "gausson/split_step.hpp"
#include "gausson/tau_ode.hpp"
