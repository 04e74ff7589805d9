#pragma once

#include "dplimit/corpus.hpp"
#include "dplimit/errors.hpp"
#include "dplimit/evaluation.hpp"
#include "dplimit/family.hpp"
#include "dplimit/gambling.hpp"
#include "dplimit/json_io.hpp"
#include "dplimit/oracle.hpp"
#include "dplimit/state_space.hpp"
#include "dplimit/value_engine.hpp"
