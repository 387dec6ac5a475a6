#pragma once

#include "gsc/cluster.hpp"
#include "gsc/corpus.hpp"
#include "gsc/embed.hpp"
#include "gsc/errors.hpp"
#include "gsc/eval.hpp"
#include "gsc/explain.hpp"
#include "gsc/io.hpp"
#include "gsc/spectra.hpp"
#include "gsc/synth.hpp"
#include "gsc/types.hpp"
#include "gsc/version.hpp"
