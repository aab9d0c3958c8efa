#pragma once

#include "qcqp/error.hpp"
#include "qcqp/instances.hpp"
#include "qcqp/linalg.hpp"
#include "qcqp/oracle.hpp"
#include "qcqp/problem.hpp"
#include "qcqp/rng.hpp"
#include "qcqp/secular.hpp"
#include "qcqp/solver.hpp"
#include "qcqp/transform.hpp"
