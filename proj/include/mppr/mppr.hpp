#ifndef MPPR_MPPR_HPP
#define MPPR_MPPR_HPP

#include "mppr/errors.hpp"
#include "mppr/graph.hpp"
#include "mppr/solver.hpp"
#include "mppr/oracle.hpp"
#include "mppr/sizeest.hpp"
#include "mppr/experiment.hpp"

#endif
