#pragma once

#include "derivlab/config.hpp"
#include "derivlab/csv.hpp"
#include "derivlab/derivation.hpp"
#include "derivlab/dual_norm.hpp"
#include "derivlab/extremal.hpp"
#include "derivlab/jspace.hpp"
#include "derivlab/json_io.hpp"
#include "derivlab/rand_sums.hpp"
#include "derivlab/rng.hpp"
#include "derivlab/seq_vector.hpp"
#include "derivlab/spaces.hpp"
#include "derivlab/tsirelson.hpp"
#include "derivlab/twisted.hpp"
#include "derivlab/verify.hpp"
