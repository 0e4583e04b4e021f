#ifndef DGSCHED_DGSCHED_HPP
#define DGSCHED_DGSCHED_HPP

#include "dgsched/config_io.hpp"
#include "dgsched/control.hpp"
#include "dgsched/decision.hpp"
#include "dgsched/engine.hpp"
#include "dgsched/error.hpp"
#include "dgsched/independent_set.hpp"
#include "dgsched/lp.hpp"
#include "dgsched/matching.hpp"
#include "dgsched/metrics.hpp"
#include "dgsched/model.hpp"
#include "dgsched/oracle.hpp"
#include "dgsched/queues.hpp"
#include "dgsched/sched.hpp"
#include "dgsched/sweep.hpp"

#endif // DGSCHED_DGSCHED_HPP
