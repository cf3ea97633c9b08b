#pragma once

// Umbrella header.

#include "edkit/adapters.hpp"
#include "edkit/align.hpp"
#include "edkit/corpus.hpp"
#include "edkit/corpus_builder.hpp"
#include "edkit/error.hpp"
#include "edkit/eval.hpp"
#include "edkit/evaluate.hpp"
#include "edkit/ingest.hpp"
#include "edkit/manifest.hpp"
#include "edkit/parse.hpp"
#include "edkit/prompt.hpp"
#include "edkit/reformulate.hpp"
#include "edkit/report.hpp"
#include "edkit/stats.hpp"
#include "edkit/text.hpp"
