#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "uode/ratfunc.hpp"

namespace uode {

// Identifies a function unknown within one session; the value doubles as
// the creation index (strictly increasing, solver-introduced functions
// always newer than what they replace).
struct FuncId {
    int value = -1;
    bool valid() const { return value >= 0; }
    friend auto operator<=>(const FuncId&, const FuncId&) = default;
};

// Append-only registry for one solving session: the base variable, given
// functions, formal integrals with their integrands, integration
// constants, and the function table.  Lookups and appends are guarded so
// concurrent readers of shared session state stay safe.
class Session {
  public:
    explicit Session(std::string base_name = "x");
    Session(const Session& o);
    Session& operator=(const Session&) = delete;

    const std::string& base_name() const { return base_name_; }
    VarKey base() const { return base_var(base_name_); }

    void declare_given(const std::string& name);
    bool is_given(const std::string& name) const;
    const std::vector<std::string>& given_names() const { return givens_; }

    // Formal integrals are cached by canonical integrand, so integrating
    // the same expression twice yields the same indeterminate.
    VarKey integral_of(const RatFunc& integrand);
    RatFunc integrand(const VarKey& v) const;

    VarKey fresh_constant();
    VarKey declare_constant(const std::string& name);
    bool is_constant(const std::string& name) const;
    const std::vector<std::string>& constant_names() const { return constants_; }

    // --- function table ---
    FuncId declare_function(const std::string& name);  // user-declared
    FuncId fresh_function();                           // solver-introduced
    std::optional<FuncId> find_function(const std::string& name) const;
    std::string func_name(FuncId f) const;
    bool is_user_function(FuncId f) const;
    int function_count() const;

    bool name_taken(const std::string& name) const;

  private:
    std::string fresh_name_locked(const std::string& stem);

    mutable std::mutex mu_;
    std::string base_name_;
    std::vector<std::string> givens_;
    std::vector<std::string> constants_;
    std::vector<std::pair<std::string, RatFunc>> integrals_;  // name, integrand
    std::map<std::string, std::size_t> integral_cache_;       // key -> index

    struct FuncInfo {
        std::string name;
        bool user_declared;
    };
    std::vector<FuncInfo> funcs_;
};

}  // namespace uode
