#pragma once

#include "ripchirp/addcomb.hpp"
#include "ripchirp/chirp_io.hpp"
#include "ripchirp/construction.hpp"
#include "ripchirp/dense.hpp"
#include "ripchirp/error.hpp"
#include "ripchirp/modmath.hpp"
#include "ripchirp/params.hpp"
#include "ripchirp/residue_set.hpp"
#include "ripchirp/ric.hpp"
#include "ripchirp/rng.hpp"
