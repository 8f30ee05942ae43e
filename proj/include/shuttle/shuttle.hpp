#pragma once

#include "shuttle/architecture.hpp"
#include "shuttle/benchgen.hpp"
#include "shuttle/circuit.hpp"
#include "shuttle/error_model.hpp"
#include "shuttle/harness.hpp"
#include "shuttle/mapper.hpp"
#include "shuttle/metrics.hpp"
#include "shuttle/placement.hpp"
#include "shuttle/qasm.hpp"
#include "shuttle/rng.hpp"
#include "shuttle/schedule.hpp"
#include "shuttle/unitary.hpp"
#include "shuttle/units.hpp"
