#pragma once

#include "dsson/error.hpp"
#include "dsson/fft.hpp"
#include "dsson/ingest.hpp"
#include "dsson/mixdown.hpp"
#include "dsson/models.hpp"
#include "dsson/png.hpp"
#include "dsson/segmentation.hpp"
#include "dsson/synth.hpp"
#include "dsson/time_series.hpp"
#include "dsson/trend.hpp"
#include "dsson/wav.hpp"
