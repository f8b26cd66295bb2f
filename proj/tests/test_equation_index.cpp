#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "dlindblad/equation_index.hpp"

using namespace dlindblad;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::set<std::string> declared_tests() {
    std::set<std::string> ids;
    const std::regex re(R"(TEST\(\s*(\w+)\s*,\s*(\w+)\s*\))");
    for (const auto& entry : std::filesystem::directory_iterator(DLINDBLAD_TEST_DIR)) {
        if (entry.path().extension() != ".cpp") continue;
        const std::string src = slurp(entry.path());
        for (auto it = std::sregex_iterator(src.begin(), src.end(), re); it != std::sregex_iterator(); ++it) {
            ids.insert((*it)[1].str() + "." + (*it)[2].str());
        }
    }
    return ids;
}

}  // namespace

TEST(EquationIndex, CoversEveryEquationInOrder) {
    for (int i = 0; i < kEquationCount; ++i) {
        EXPECT_EQ(kEquationIndex[static_cast<std::size_t>(i)].eq, i + 1);
        EXPECT_FALSE(kEquationIndex[static_cast<std::size_t>(i)].tests.empty()) << "eq " << i + 1;
        EXPECT_FALSE(kEquationIndex[static_cast<std::size_t>(i)].module.empty()) << "eq " << i + 1;
    }
}

TEST(EquationIndex, ReferencedTestsExist) {
    const auto ids = declared_tests();
    ASSERT_GT(ids.size(), 50u);
    for (const auto& e : kEquationIndex) {
        std::istringstream ss{std::string(e.tests)};
        std::string id;
        while (ss >> id) EXPECT_TRUE(ids.count(id)) << "eq " << e.eq << " references missing test " << id;
    }
}

TEST(EquationIndex, GeneratedDocIsCurrent) {
    const std::filesystem::path doc = std::filesystem::path(DLINDBLAD_SOURCE_DIR) / "docs" / "equation-index.md";
    ASSERT_TRUE(std::filesystem::exists(doc)) << "run gen_equation_index " << doc;
    EXPECT_EQ(slurp(doc), equation_index_markdown()) << "docs/equation-index.md is stale; rebuild the equation_index target";
}
