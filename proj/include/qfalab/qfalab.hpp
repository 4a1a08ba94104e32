#pragma once

// Umbrella header for the whole library.

#include "qfalab/automata.hpp"
#include "qfalab/bitstrings.hpp"
#include "qfalab/channels.hpp"
#include "qfalab/complex_matrix.hpp"
#include "qfalab/decode.hpp"
#include "qfalab/density.hpp"
#include "qfalab/eigen.hpp"
#include "qfalab/ensemble.hpp"
#include "qfalab/entropy_lab.hpp"
#include "qfalab/errors.hpp"
#include "qfalab/experiments.hpp"
#include "qfalab/joint.hpp"
#include "qfalab/rac.hpp"
#include "qfalab/rng.hpp"
#include "qfalab/serialize.hpp"
