#pragma once

#include <compare>
#include <string>

namespace uode {

// The coefficient field is Q(x, a, a', a'', ..., Int(g), C1, C2, ...):
// rational functions of the base variable together with finitely many
// differential indeterminates.  Every indeterminate is identified by a
// VarKey; no global registry is needed to compare or multiply them.
enum class VarKind : int {
    BaseVar = 0,    // the independent variable, unique per session
    GivenFunc = 1,  // a declared function a(x); order = derivative count
    Integral = 2,   // opaque antiderivative, integrand recorded in Session
    Constant = 3,   // integration constant, derivative zero
};

struct VarKey {
    VarKind kind = VarKind::BaseVar;
    std::string name;
    int order = 0;  // only GivenFunc uses order > 0

    friend auto operator<=>(const VarKey&, const VarKey&) = default;
};

// Monomial order is lexicographic on the (kind, name, order) ranking with
// the base variable lowest; a given function's derivatives sort by order.
inline VarKey base_var(const std::string& name) {
    return VarKey{VarKind::BaseVar, name, 0};
}
inline VarKey given_var(const std::string& name, int order = 0) {
    return VarKey{VarKind::GivenFunc, name, order};
}
inline VarKey constant_var(const std::string& name) {
    return VarKey{VarKind::Constant, name, 0};
}
inline VarKey integral_var(const std::string& name) {
    return VarKey{VarKind::Integral, name, 0};
}

}  // namespace uode
