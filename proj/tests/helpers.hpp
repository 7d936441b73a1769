#pragma once
#include <fstream>
#include <sstream>
#include <string>

#include "plancorpus/ground.hpp"
#include "plancorpus/parser.hpp"
#include "plancorpus/templates.hpp"

namespace testutil {

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline std::string fixture(const std::string& rel) {
    return std::string(PLANCORPUS_FIXTURES_DIR) + "/" + rel;
}

inline std::string testdata(const std::string& rel) {
    return std::string(PLANCORPUS_TESTDATA_DIR) + "/" + rel;
}

inline plancorpus::Domain load_domain(const std::string& name) {
    return plancorpus::parse_domain(slurp(fixture("domains/" + name + "/domain.pddl")));
}

inline plancorpus::TemplateSet load_templates(const std::string& name) {
    return plancorpus::parse_templates(slurp(fixture("domains/" + name + "/templates.json")));
}

inline const char* kTinyBlocks2 = R"(
(define (problem two)
  (:domain blocksworld)
  (:objects a b - block)
  (:init (on-table a) (on-table b) (clear a) (clear b) (hand-empty))
  (:goal (and (on-top-of a b))))
)";

}  // namespace testutil
