#pragma once

// Umbrella header for the mistrust-metric toolkit.

#include "mistrust/analysis.hpp"
#include "mistrust/chart_features.hpp"
#include "mistrust/cohort.hpp"
#include "mistrust/common.hpp"
#include "mistrust/csv.hpp"
#include "mistrust/data_model.hpp"
#include "mistrust/defaults.hpp"
#include "mistrust/noncompliance.hpp"
#include "mistrust/report_io.hpp"
#include "mistrust/sentiment.hpp"
#include "mistrust/sparse_logreg.hpp"
#include "mistrust/stats.hpp"
#include "mistrust/svg.hpp"
#include "mistrust/synth.hpp"
#include "mistrust/timestamp.hpp"
#include "mistrust/treatments.hpp"
