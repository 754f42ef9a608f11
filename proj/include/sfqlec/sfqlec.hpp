/*!
  \file sfqlec.hpp
  \brief Main header
*/

#pragma once

#include "gate_kind.hpp"
#include "netlist.hpp"
#include "bench_io.hpp"
#include "tech_profile.hpp"
#include "structural_checks.hpp"
#include "mcid.hpp"
#include "itcl.hpp"
#include "normal_form.hpp"
#include "sat_solver.hpp"
#include "equivalence.hpp"
#include "simulation.hpp"
#include "fault_injection.hpp"
#include "flow.hpp"
