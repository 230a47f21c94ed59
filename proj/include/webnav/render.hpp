#pragma once

#include <ostream>

#include "json.hpp"
#include "webnav/dissimilarity.hpp"
#include "webnav/evaluation.hpp"
#include "webnav/predictor.hpp"
#include "webnav/session_store.hpp"

// Machine-readable (JSON) and human-readable renderings shared by the CLI and
// the HTTP service, so both surfaces emit identical fields.
namespace webnav {

using Json = nlohmann::ordered_json;

Json categories_json(const Catalog& catalog);
Json histogram_json(const LengthHistogram& h);
Json params_json(const PredictorParams& p);
Json prediction_json(const Prediction& p, const Catalog& catalog);
Json tree_json(const PredictionTree& t, const Catalog& catalog);
Json task_json(const EvalTask& t);
Json report_json(const EvalReport& r);

void write_histogram(std::ostream& out, const LengthHistogram& h);
void write_prediction(std::ostream& out, const Prediction& p, const Catalog& catalog);
void write_tree(std::ostream& out, const PredictionTree& t, const Catalog& catalog);
void write_report(std::ostream& out, const EvalReport& r);
/// Tab-separated: trajectory index, length, dissimilarity, pages.
void write_dissimilarity_row(std::ostream& out, const DissimilarityRow& row, const SessionDataset& ds);

}  // namespace webnav
