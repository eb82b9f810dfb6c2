#include "mha/report.hpp"

#include <stdexcept>

namespace mha {

void VerificationReport::add(const std::string& name, bool pass,
                             std::optional<std::string> witness) {
    checks.push_back(Check{name, pass, std::move(witness)});
}

bool VerificationReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

bool VerificationReport::passed(const std::string& name) const {
    const Check* c = find(name);
    return c && c->pass;
}

const Check* VerificationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

const std::vector<RegistryEntry>& check_registry() {
    static const std::vector<RegistryEntry> registry = {
        // structure of the algebroid
        {"quantum-graph", CheckSection::Algebroid},
        {"canonical-descent", CheckSection::Algebroid},
        {"canonical-bijective", CheckSection::Algebroid},
        {"eq:left-comult-module", CheckSection::Algebroid},
        {"eq:right-comult-module", CheckSection::Algebroid},
        {"eq:left-comult-coass", CheckSection::Algebroid},
        {"eq:right-comult-coass", CheckSection::Algebroid},
        {"dg:left-galois-1", CheckSection::Algebroid},
        {"dg:left-galois-2", CheckSection::Algebroid},
        {"dg:right-galois-1", CheckSection::Algebroid},
        {"dg:right-galois-2", CheckSection::Algebroid},
        {"dg:compatible", CheckSection::Algebroid},
        {"dg:left-counit", CheckSection::Algebroid},
        {"eq:right-counit", CheckSection::Algebroid},
        {"counit-unique", CheckSection::Algebroid},
        {"dg:antipode", CheckSection::Algebroid},
        {"dg:antipode-right", CheckSection::Algebroid},
        {"antipode-solvable", CheckSection::Algebroid},
        {"antipode-invertible", CheckSection::Algebroid},
        {"dg:galois-inverse", CheckSection::Algebroid},
        {"dg:galois-inverse-right", CheckSection::Algebroid},
        {"dg:galois-aux", CheckSection::Algebroid},
        {"dg:galois-aux-right", CheckSection::Algebroid},
        {"dg:galois-aux2", CheckSection::Algebroid},
        {"dg:galois-aux2-right", CheckSection::Algebroid},
        {"lemma:counits-antipode", CheckSection::Algebroid},
        {"star-admissible", CheckSection::Algebroid},
        {"star-comult", CheckSection::Algebroid},
        {"eq:involutions", CheckSection::Algebroid},
        // integration
        {"def:base-weight", CheckSection::Integration},
        {"prop:counit-kms", CheckSection::Integration},
        {"adapted-functionals", CheckSection::Integration},
        {"eq:invariance-canonical-left", CheckSection::Integration},
        {"eq:invariance-canonical-right", CheckSection::Integration},
        {"dg:strong-invariance-left", CheckSection::Integration},
        {"dg:strong-invariance-right", CheckSection::Integration},
        {"integral-full", CheckSection::Integration},
        {"integral-faithful", CheckSection::Integration},
        {"thm:integrals-faithful", CheckSection::Integration},
        {"prop:integrals-antipode", CheckSection::Integration},
        {"thm:integrals-uniqueness", CheckSection::Integration},
        {"prop:uniqueness-phi-psi", CheckSection::Integration},
        {"thm:uniqueness-full", CheckSection::Integration},
        {"cor:full", CheckSection::Integration},
        {"thm:modular", CheckSection::Integration},
        {"thm:modular-automorphism", CheckSection::Integration},
        {"lemma:bphi-phib", CheckSection::Integration},
        {"thm:modular-element", CheckSection::Integration},
        {"thm:modular-element-second", CheckSection::Integration},
        {"lemma:modular-intertwine", CheckSection::Integration},
        {"prop:convolution", CheckSection::Integration},
        {"lemma:convolution", CheckSection::Integration},
        {"cor:dual-strong-invariance", CheckSection::Integration},
        {"eq:convolution-counit", CheckSection::Integration},
        {"lemma:extension-multipliers", CheckSection::Integration},
        {"eq:base-counit-mult", CheckSection::Integration},
        {"eq:integrals-oo", CheckSection::Integration},
        {"star-positivity", CheckSection::Integration},
        // duality
        {"prop:dual-algebra", CheckSection::Duality},
        {"prop:dual-quantum-graphs", CheckSection::Duality},
        {"lemma:dual-evaluation", CheckSection::Duality},
        {"lemma:dual-pairings", CheckSection::Duality},
        {"lemma:dual-embeddings", CheckSection::Duality},
        {"lemma:dual-bijections", CheckSection::Duality},
        {"lemma:dual-counit", CheckSection::Duality},
        {"thm:dual-hopf-algebroid", CheckSection::Duality},
        {"thm:dual-measured", CheckSection::Duality},
        {"eq:dual-left-integral", CheckSection::Duality},
        {"eq:dual-right-integral", CheckSection::Duality},
        {"eq:dual-right-integral-fac", CheckSection::Duality},
        {"prop:dual-involution", CheckSection::Duality},
        {"star-dual-integrals", CheckSection::Duality},
        {"thm:biduality", CheckSection::Duality},
        {"thm:dual-multipliers", CheckSection::Duality},
        {"prop:mult-comult", CheckSection::Duality},
        {"prop:dual-galois-multipliers", CheckSection::Duality},
        {"lemma:dual-bimodule-explicit", CheckSection::Duality},
        {"lemma:counit-convolution", CheckSection::Duality},
        // concrete models
        {"prop:groupoid-hopf", CheckSection::Models},
        {"thm:groupoid-measured", CheckSection::Models},
        {"thm:groupoid-dual", CheckSection::Models},
        {"groupoid-delta-cocycle", CheckSection::Models},
        {"hopf-axioms", CheckSection::Models},
        {"eq:coupled-action", CheckSection::Models},
        {"eq:coupled-invariance", CheckSection::Models},
        {"prop:coupled-hopf", CheckSection::Models},
        {"thm:coupled-measured", CheckSection::Models},
        {"thm:coupled-dual", CheckSection::Models},
    };
    return registry;
}

CheckSection section_of(const std::string& check_name) {
    for (const auto& e : check_registry())
        if (check_name == e.name) return e.section;
    throw std::out_of_range("unknown check name: " + check_name);
}

const char* section_title(CheckSection s) {
    switch (s) {
        case CheckSection::Algebroid: return "algebroid structure";
        case CheckSection::Integration: return "integration";
        case CheckSection::Duality: return "duality";
        case CheckSection::Models: return "models";
    }
    return "?";
}

} // namespace mha
