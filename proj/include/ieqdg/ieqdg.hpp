// Umbrella header.

#pragma once

#include "ieqdg/assembly.hpp"
#include "ieqdg/baselines.hpp"
#include "ieqdg/basis.hpp"
#include "ieqdg/block_solver.hpp"
#include "ieqdg/config.hpp"
#include "ieqdg/csv.hpp"
#include "ieqdg/errors.hpp"
#include "ieqdg/field.hpp"
#include "ieqdg/ieq.hpp"
#include "ieqdg/mesh.hpp"
#include "ieqdg/model.hpp"
#include "ieqdg/presets.hpp"
#include "ieqdg/quadrature.hpp"
#include "ieqdg/runner.hpp"
#include "ieqdg/space.hpp"
