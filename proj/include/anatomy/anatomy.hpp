#pragma once

#include "anatomy/block_analysis.hpp"
#include "anatomy/csv.hpp"
#include "anatomy/epsilon_machine.hpp"
#include "anatomy/errors.hpp"
#include "anatomy/information_diagram.hpp"
#include "anatomy/joint_distribution.hpp"
#include "anatomy/machine_io.hpp"
#include "anatomy/measures.hpp"
#include "anatomy/mixed_state.hpp"
#include "anatomy/pid.hpp"
#include "anatomy/processes.hpp"
#include "anatomy/sampling.hpp"
