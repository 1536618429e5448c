#pragma once

#include "nvfield/calibration.hpp"
#include "nvfield/config.hpp"
#include "nvfield/decoherence.hpp"
#include "nvfield/eigensolve.hpp"
#include "nvfield/error.hpp"
#include "nvfield/field_response.hpp"
#include "nvfield/fields.hpp"
#include "nvfield/hamiltonian.hpp"
#include "nvfield/hyperfine.hpp"
#include "nvfield/io.hpp"
#include "nvfield/odmr.hpp"
#include "nvfield/optimize.hpp"
#include "nvfield/params.hpp"
#include "nvfield/pulse_sequence.hpp"
#include "nvfield/readout.hpp"
#include "nvfield/signal.hpp"
#include "nvfield/spin_matrix.hpp"
#include "nvfield/units.hpp"
