#pragma once

#include "hill/center_manifold.hpp"
#include "hill/constants.hpp"
#include "hill/continuation.hpp"
#include "hill/corrector.hpp"
#include "hill/dop853.hpp"
#include "hill/errors.hpp"
#include "hill/hill_model.hpp"
#include "hill/hopf.hpp"
#include "hill/io.hpp"
#include "hill/legendre.hpp"
#include "hill/lissajous.hpp"
#include "hill/normalization.hpp"
#include "hill/states.hpp"
#include "hill/synthesis.hpp"
#include "hill/trajectory.hpp"
