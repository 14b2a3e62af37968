#pragma once

// Everything except the command-line layer (cli.hpp).

#include "bits.hpp"
#include "checks.hpp"
#include "dual.hpp"
#include "errors.hpp"
#include "fermi.hpp"
#include "gamma.hpp"
#include "gauge.hpp"
#include "graph.hpp"
#include "heis.hpp"
#include "lattice_io.hpp"
#include "pauli.hpp"
#include "spectra.hpp"
#include "spectrum.hpp"
#include "torus.hpp"
