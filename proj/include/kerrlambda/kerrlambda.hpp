#pragma once

#include "kerrlambda/scaled_value.hpp"
#include "kerrlambda/fock_distribution.hpp"
#include "kerrlambda/three_level_dynamics.hpp"
#include "kerrlambda/observables.hpp"
#include "kerrlambda/simulation_driver.hpp"
#include "kerrlambda/number_format.hpp"
#include "kerrlambda/config.hpp"
#include "kerrlambda/csv_writer.hpp"
#include "kerrlambda/svg_plot.hpp"
