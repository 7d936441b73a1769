#include "plancorpus/fixtures.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "plancorpus/errors.hpp"
#include "plancorpus/parser.hpp"

namespace fs = std::filesystem;

namespace plancorpus {

std::string fixtures_dir() {
    if (const char* env = std::getenv("PLANCORPUS_FIXTURES")) return env;
    return PLANCORPUS_FIXTURES_DIR;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

DomainFixture load_domain_fixture(const std::string& root, const std::string& name) {
    fs::path dir = fs::path(root) / "domains" / name;
    if (!fs::is_directory(dir)) throw DataError("no such domain fixture: " + name);
    DomainFixture f;
    f.name = name;
    f.domain = parse_domain(read_file((dir / "domain.pddl").string()));
    f.templates = parse_templates(read_file((dir / "templates.json").string()));
    f.templates.check_covers(f.domain);
    fs::path obf = dir / "obfuscation.json";
    if (fs::exists(obf)) {
        f.obfuscation = parse_obfuscation(read_file(obf.string()));
        f.obfuscation->check_bijective(f.domain);
    }
    return f;
}

DomainFixture load_domain_fixture(const std::string& name) {
    return load_domain_fixture(fixtures_dir(), name);
}

std::vector<std::string> list_domain_fixtures() {
    fs::path dir = fs::path(fixtures_dir()) / "domains";
    std::vector<std::string> names;
    if (!fs::is_directory(dir)) return names;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_directory()) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

}  // namespace plancorpus
