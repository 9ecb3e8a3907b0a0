#pragma once

#include <string>
#include <vector>

#include "frao/families.hpp"

namespace frao {

struct UnknownFamily : Error {
    explicit UnknownFamily(const std::string& name) : Error("unknown family: " + name) {}
};

// Build a family from its registry name:
//   exponential, rayleigh, categorical(d), normal1d, cauchy, student(k),
//   mvn(d), centered-mvn(d), mggd(k,d), mtd(k,d), wishart(d), spd(d).
// Wires the family's preferred certified lower/upper bound providers.
// Throws UnknownFamily for unrecognized names.
FamilyDescriptor make_family(const std::string& name);

// Attach default bound providers (used by the approximation schemes) to a
// descriptor; no-op for families without certified bounds.
void attach_default_bounds(FamilyDescriptor& fam);

std::vector<std::string> registry_names();

}  // namespace frao
