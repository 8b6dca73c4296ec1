#pragma once

// Umbrella header: the whole laboratory.

#include "logcorr/bigint.hpp"
#include "logcorr/branching.hpp"
#include "logcorr/charpoly.hpp"
#include "logcorr/closed_forms.hpp"
#include "logcorr/common.hpp"
#include "logcorr/ensembles.hpp"
#include "logcorr/experiments.hpp"
#include "logcorr/fft.hpp"
#include "logcorr/mom.hpp"
#include "logcorr/number_models.hpp"
#include "logcorr/poly.hpp"
#include "logcorr/primes.hpp"
#include "logcorr/ring2q.hpp"
#include "logcorr/rng.hpp"
#include "logcorr/special.hpp"
#include "logcorr/symfunc.hpp"
#include "logcorr/zeta.hpp"
