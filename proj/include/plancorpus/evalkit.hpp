#pragma once
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "plancorpus/corpus.hpp"
#include "plancorpus/exec.hpp"
#include "plancorpus/fixtures.hpp"
#include "plancorpus/model.hpp"

namespace plancorpus {

// One judged model response. `verdict` absent means the response did
// not parse; it is scored all-false.
struct ResultRecord {
    std::string id;
    std::size_t sample = 0;
    std::optional<Plan> plan;
    std::optional<PlanVerdict> verdict;
};

struct Rates {
    double validity = 0.0;
    double executability = 0.0;  // counts only plans with >= 4 actions
    double goal_sat = 0.0;
};

// One record per instance. Throws DataError on empty input.
Rates rates(const std::vector<ResultRecord>& records);

// Exact best-of-k over per-instance sample groups (first k samples).
// Throws DataError when a group has fewer than k samples.
double pass_at_k(const std::vector<std::vector<ResultRecord>>& groups, std::size_t k);

struct ProbeRecord {
    bool is_wrong = false;  // ground truth for the step
    double p_wrong = 0.0;     // probability of the removal token
    double p_continue = 0.0;  // probability of the newline token
};

struct ProbeScores {
    double precision = 0.0;
    double recall = 0.0;
};

// Predicted-mistake iff p_wrong > p_continue (ties are not mistakes).
// Throws DataError when a denominator is zero (no predictions / no
// actual mistakes).
ProbeScores probing_scores(const std::vector<ProbeRecord>& records);

struct ContinuationPrompt {
    std::string query;      // original query + open plan block with the prefix
    Problem check_problem;  // init advanced past the prefix
    Plan prefix;
};

// Prompt for the familiar-length continuation probe: the instance's
// query followed by the first `prefix_len` reference actions inside an
// open plan block. Throws DataError when prefix_len >= plan length or
// the prefix does not execute.
ContinuationPrompt continuation_prompt(const CorpusInstance& inst, std::size_t prefix_len,
                                       const DomainFixture& f);

// Judge model outputs `{id, sample, response}` (JSONL) against a corpus
// file's instances.
std::vector<ResultRecord> judge_outputs(const std::vector<CorpusInstance>& instances,
                                        const std::string& outputs_jsonl,
                                        const DomainFixture& f);

struct ReportRow {
    std::string domain;
    std::string split;
    Rates r;
    std::size_t count = 0;
};

std::string report_jsonl(const std::vector<ReportRow>& rows);
std::string report_table(const std::vector<ReportRow>& rows);

}  // namespace plancorpus
