#pragma once
#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "plancorpus/fixtures.hpp"
#include "plancorpus/model.hpp"

namespace plancorpus {

struct RewardScore {
    double reward = 0.0;
    bool valid = false;
    std::size_t lccs_len = 0;
    std::size_t ref_len = 0;
};

// Longest contiguous common subsequence over canonical ground action
// tuples. Symmetric; 0 <= result <= min(|a|,|b|).
std::size_t lccs_len(const Plan& a, const Plan& b);

// Eq.-style reward: 1 when the generated plan judges valid, else
// lccs_len / |reference|. Throws ValidationError when the reference
// itself does not judge valid. Empty reference + invalid generated
// plan scores 0 (division undefined); a valid plan still scores 1.
RewardScore score(const Domain& d, const Problem& p, const Plan& generated,
                  const Plan& reference);

// Optional multi-reference mode: max score over all references.
RewardScore score_multi(const Domain& d, const Problem& p, const Plan& generated,
                        const std::vector<Plan>& references);

// Resolves instance ids from `corpus_dir` (JSONL files next to the
// manifest); requests may instead carry inline PDDL. Generated text is
// parsed leniently; the unparseable tail is dropped, an empty prefix
// scores 0.
class RewardServer {
public:
    explicit RewardServer(std::string corpus_dir = "");

    // One NDJSON request line -> one NDJSON response line.
    // Instance form: {"id", "instance", "generated"} with the generated
    // response as NL text; "reference"/"references" (VAL plan text)
    // override the stored reference. Inline form: {"id", "domain",
    // "problem", "generated", "reference"} with PDDL texts and VAL
    // plans. Errors come back as {"id", "error"}.
    std::string handle_line(const std::string& line);

    // stdin/stdout loop; one response per request line.
    void run(std::istream& in, std::ostream& out);

private:
    struct Entry {
        std::string domain;
        std::string split;
        std::string query;
        std::string reference_plan;
    };
    const Entry* find_instance(const std::string& id);
    DomainFixture& fixture(const std::string& name);

    std::string corpus_dir_;
    bool corpus_loaded_ = false;
    std::map<std::string, Entry> instances_;
    std::map<std::string, DomainFixture> fixtures_;
};

}  // namespace plancorpus
