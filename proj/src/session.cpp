#include "uode/session.hpp"

#include <sstream>

#include "uode/errors.hpp"

namespace uode {

Session::Session(std::string base_name) : base_name_(std::move(base_name)) {}

Session::Session(const Session& o) {
    std::lock_guard lk(o.mu_);
    base_name_ = o.base_name_;
    givens_ = o.givens_;
    constants_ = o.constants_;
    integrals_ = o.integrals_;
    integral_cache_ = o.integral_cache_;
    funcs_ = o.funcs_;
}

void Session::declare_given(const std::string& name) {
    std::lock_guard lk(mu_);
    for (const auto& g : givens_)
        if (g == name) return;
    givens_.push_back(name);
}

bool Session::is_given(const std::string& name) const {
    std::lock_guard lk(mu_);
    for (const auto& g : givens_)
        if (g == name) return true;
    return false;
}

namespace {
std::string integrand_key(const RatFunc& r) {
    return r.num().str() + "|" + r.den().str();
}
}  // namespace

VarKey Session::integral_of(const RatFunc& integrand) {
    std::lock_guard lk(mu_);
    std::string key = integrand_key(integrand);
    if (auto it = integral_cache_.find(key); it != integral_cache_.end())
        return integral_var(integrals_[it->second].first);
    std::string name = fresh_name_locked("Iv");
    integral_cache_[key] = integrals_.size();
    integrals_.push_back({name, integrand});
    return integral_var(name);
}

RatFunc Session::integrand(const VarKey& v) const {
    std::lock_guard lk(mu_);
    for (const auto& [name, r] : integrals_)
        if (name == v.name) return r;
    throw MathError("unknown integral indeterminate " + v.name);
}

VarKey Session::fresh_constant() {
    std::lock_guard lk(mu_);
    std::string name = fresh_name_locked("C");
    constants_.push_back(name);
    return constant_var(name);
}

VarKey Session::declare_constant(const std::string& name) {
    std::lock_guard lk(mu_);
    for (const auto& c : constants_)
        if (c == name) return constant_var(name);
    constants_.push_back(name);
    return constant_var(name);
}

bool Session::is_constant(const std::string& name) const {
    std::lock_guard lk(mu_);
    for (const auto& c : constants_)
        if (c == name) return true;
    return false;
}

FuncId Session::declare_function(const std::string& name) {
    std::lock_guard lk(mu_);
    for (std::size_t i = 0; i < funcs_.size(); ++i)
        if (funcs_[i].name == name)
            throw Error("function declared twice: " + name);
    funcs_.push_back({name, true});
    return FuncId{static_cast<int>(funcs_.size()) - 1};
}

FuncId Session::fresh_function() {
    std::lock_guard lk(mu_);
    std::string name = fresh_name_locked("f");
    funcs_.push_back({name, false});
    return FuncId{static_cast<int>(funcs_.size()) - 1};
}

std::optional<FuncId> Session::find_function(const std::string& name) const {
    std::lock_guard lk(mu_);
    for (std::size_t i = 0; i < funcs_.size(); ++i)
        if (funcs_[i].name == name) return FuncId{static_cast<int>(i)};
    return std::nullopt;
}

std::string Session::func_name(FuncId f) const {
    std::lock_guard lk(mu_);
    return funcs_.at(f.value).name;
}

bool Session::is_user_function(FuncId f) const {
    std::lock_guard lk(mu_);
    return funcs_.at(f.value).user_declared;
}

int Session::function_count() const {
    std::lock_guard lk(mu_);
    return static_cast<int>(funcs_.size());
}

bool Session::name_taken(const std::string& name) const {
    std::lock_guard lk(mu_);
    if (name == base_name_) return true;
    for (const auto& g : givens_)
        if (g == name) return true;
    for (const auto& c : constants_)
        if (c == name) return true;
    for (const auto& [n, r] : integrals_)
        if (n == name) return true;
    for (const auto& f : funcs_)
        if (f.name == name) return true;
    return false;
}

std::string Session::fresh_name_locked(const std::string& stem) {
    // Counting from the current table size keeps solver-introduced
    // functions in the paper's f3, f4, ... style after user f1, f2.
    std::size_t n = stem == "f" ? funcs_.size() + 1
                  : stem == "C" ? constants_.size() + 1
                                : integrals_.size() + 1;
    while (true) {
        std::ostringstream os;
        os << stem << n;
        std::string cand = os.str();
        bool taken = cand == base_name_;
        for (const auto& g : givens_) taken |= g == cand;
        for (const auto& c : constants_) taken |= c == cand;
        for (const auto& [nm, r] : integrals_) taken |= nm == cand;
        for (const auto& f : funcs_) taken |= f.name == cand;
        if (!taken) return cand;
        ++n;
    }
}

}  // namespace uode
