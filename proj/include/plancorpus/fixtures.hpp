#pragma once
#include <optional>
#include <string>
#include <vector>

#include "plancorpus/model.hpp"
#include "plancorpus/obfuscate.hpp"
#include "plancorpus/templates.hpp"

namespace plancorpus {

// One shipped domain directory: domain.pddl + templates.json, plus an
// optional obfuscation.json.
struct DomainFixture {
    std::string name;
    Domain domain;
    TemplateSet templates;
    std::optional<ObfuscationMap> obfuscation;
};

// Root of the fixture tree. Defaults to the compiled-in path; the
// PLANCORPUS_FIXTURES environment variable overrides it.
std::string fixtures_dir();

std::string read_file(const std::string& path);

// Throws DataError if the directory or a required file is missing.
DomainFixture load_domain_fixture(const std::string& name);
DomainFixture load_domain_fixture(const std::string& root, const std::string& name);

std::vector<std::string> list_domain_fixtures();

}  // namespace plancorpus
