#pragma once

#include <optional>
#include <string>
#include <vector>

namespace mha {

// One verification item. Check names come from the fixed registry below;
// the witness pinpoints the first failing coordinate tuple when available.
struct Check {
    std::string name;
    bool pass = false;
    std::optional<std::string> witness;
};

struct VerificationReport {
    std::vector<Check> checks;
    bool regular = false;
    bool measured = false;
    bool dual_ok = false;
    bool bidual_ok = false;
    // Set when verification stopped early because a prerequisite failed.
    std::optional<std::string> stopped_at;

    void add(const std::string& name, bool pass, std::optional<std::string> witness = std::nullopt);
    bool all_passed() const;
    bool passed(const std::string& name) const;
    const Check* find(const std::string& name) const;
};

// Registry of check names grouped by the report section they belong to.
// Text output groups by section; the registry is also what the meta-test
// asserts against.
enum class CheckSection { Algebroid, Integration, Duality, Models };

struct RegistryEntry {
    const char* name;
    CheckSection section;
};

const std::vector<RegistryEntry>& check_registry();
CheckSection section_of(const std::string& check_name);
const char* section_title(CheckSection s);

} // namespace mha
