#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace sdirac {

/// One corpus case outcome: the worst deviation-to-tolerance ratio across
/// the case's checks, plus the absolute numbers behind it.
struct CorpusRow {
    std::string name;
    std::string worst_check;
    double deviation = 0.0;
    double tolerance = 0.0;
    double ratio = 0.0;  // deviation / tolerance, max over checks
    bool pass = false;
    std::string error;  // nonempty when the case failed to run at all
};

struct CorpusReport {
    std::vector<CorpusRow> rows;
    bool all_pass = false;
};

/// Runs a single case document (kinds: continuous_pipeline,
/// discrete_pipeline, quadruple_sequence).
CorpusRow run_corpus_case(const nlohmann::json& doc, const std::string& name);

/// Runs every *.json case in the directory (sorted by filename); unreadable
/// cases produce error rows and the rest proceed.
CorpusReport run_corpus(const std::string& dir);

}  // namespace sdirac
