#pragma once

// Umbrella header. json_io.hpp (nlohmann/json) is left out on purpose.

#include "skewdd/integer.hpp"
#include "skewdd/errors.hpp"
#include "skewdd/number_ring.hpp"
#include "skewdd/lattice.hpp"
#include "skewdd/ideal.hpp"
#include "skewdd/class_group.hpp"
#include "skewdd/series.hpp"
#include "skewdd/matrix.hpp"
#include "skewdd/extension.hpp"
#include "skewdd/completion.hpp"
#include "skewdd/structure.hpp"
