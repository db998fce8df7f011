#pragma once

#include "clifford/check_report.hpp"
#include "clifford/errors.hpp"
#include "clifford/integer.hpp"
#include "clifford/lattice.hpp"
#include "clifford/lie_algebra.hpp"
#include "clifford/linalg.hpp"
#include "clifford/orbit.hpp"
#include "clifford/pipeline.hpp"
#include "clifford/strong_roots.hpp"
#include "clifford/torus.hpp"
#include "clifford/weights.hpp"
