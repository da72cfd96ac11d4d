#pragma once

#include "limprob/convergence.hpp"
#include "limprob/discrete_measure.hpp"
#include "limprob/event.hpp"
#include "limprob/ext_real.hpp"
#include "limprob/extended_line.hpp"
#include "limprob/family.hpp"
#include "limprob/measurable_set.hpp"
#include "limprob/process.hpp"
#include "limprob/rational.hpp"
#include "limprob/theorem.hpp"
