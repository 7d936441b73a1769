#pragma once
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "plancorpus/augment.hpp"
#include "plancorpus/fixtures.hpp"
#include "plancorpus/generator.hpp"

namespace plancorpus {

// One JSONL record. `reference_plan` holds VAL-convention plan text.
struct CorpusInstance {
    std::string id;
    std::string domain;
    std::string split;
    std::string query;
    std::string response;
    std::size_t plan_length = 0;
    std::vector<std::string> strategies;
    std::string reference_plan;
};

std::string to_jsonl(const CorpusInstance& inst);
CorpusInstance from_jsonl(const std::string& line);  // DataError on bad input
std::vector<CorpusInstance> read_corpus_file(const std::string& path);

struct SplitDef {
    std::string name;
    std::vector<std::string> domains;
    LengthRange range;
    bool train = false;       // strategies apply, instances feed the dedup set
    bool obfuscated = false;  // rendered through the domain's obfuscation map
};

struct SplitSpec {
    std::uint64_t seed = 1111;
    std::size_t train_per_domain = 4000;
    std::size_t test_per_domain = 200;
    std::vector<SplitDef> splits;

    // The four-way layout: train + in_distrib + long over the eight
    // shipped training domains, unseen over hanoi/storage, obfuscated
    // over blocksworld/logistics.
    static SplitSpec defaults();
    // Same layout at desk scale (200 train / 20 test per domain).
    static SplitSpec reduced();
};

struct ManifestFile {
    std::string file;
    std::string domain;
    std::string split;
    std::size_t count = 0;
    std::string digest;  // fnv1a-64 of the file bytes, hex
};

struct Manifest {
    std::uint64_t seed = 0;
    std::vector<ManifestFile> files;
    std::string to_json() const;
};

std::uint64_t fnv1a64(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ull);
std::string digest_hex(const std::string& bytes);

// Instances for one (domain, split). `seen` maps domain name to the
// canonical problem keys already emitted; new keys are added for train
// splits and checked for all test splits. Throws DataError when counts
// cannot be met.
std::vector<CorpusInstance> generate_domain_split(
    const DomainFixture& f, const SplitDef& split, const SplitSpec& spec,
    const AugmentConfig& cfg, std::map<std::string, std::set<std::string>>& seen);

// Generates every split, writes `<domain>.<split>.jsonl` plus
// manifest.json under out_dir, and returns the manifest.
Manifest build_splits(const SplitSpec& spec, const AugmentConfig& cfg,
                      const std::string& out_dir);

}  // namespace plancorpus
