#pragma once

#include "phibvp/errors.hpp"
#include "phibvp/kernels.hpp"
#include "phibvp/oracle.hpp"
#include "phibvp/parallel.hpp"
#include "phibvp/problem.hpp"
#include "phibvp/profile.hpp"
#include "phibvp/quadrature.hpp"
#include "phibvp/rootfind.hpp"
#include "phibvp/solver.hpp"
#include "phibvp/timemap.hpp"
