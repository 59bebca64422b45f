#pragma once

// Abstract syntax of terms and formulae in language definitions.

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace langlogic {

/// Heap-allocated value with deep-copy semantics; lets recursive variants stay regular types.
template <typename T>
class Box {
public:
    Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
    Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& other)
    {
        if (this != &other) {
            ptr_ = std::make_unique<T>(*other.ptr_);
        }
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;
    ~Box() = default;

    const T& operator*() const { return *ptr_; }
    const T* operator->() const { return ptr_.get(); }

    friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

private:
    std::unique_ptr<T> ptr_;
};

class Term;

struct MetaVarOcc {
    std::string name;
    bool operator==(const MetaVarOcc&) const = default;
};

struct ConApp {
    std::string constructor;
    std::vector<Term> args;
    bool operator==(const ConApp&) const;
};

/// `(x)t`
struct Binder {
    std::string bound_var;
    Box<Term> body;
    bool operator==(const Binder&) const;
};

/// `t[t'/x]`
struct Subst {
    Box<Term> body;
    Box<Term> replacement;
    std::string var;
    bool operator==(const Subst&) const;
};

struct Hole {
    bool operator==(const Hole&) const = default;
};

struct StrLit {
    std::string value;
    bool operator==(const StrLit&) const = default;
};

class Term {
public:
    using Node = std::variant<MetaVarOcc, ConApp, Binder, Subst, Hole, StrLit>;

    Term(MetaVarOcc n) : node_(std::move(n)) {}
    Term(ConApp n) : node_(std::move(n)) {}
    Term(Binder n) : node_(std::move(n)) {}
    Term(Subst n) : node_(std::move(n)) {}
    Term(Hole n) : node_(n) {}
    Term(StrLit n) : node_(std::move(n)) {}

    static Term metavar(std::string name) { return MetaVarOcc{std::move(name)}; }
    static Term app(std::string constructor, std::vector<Term> args = {})
    {
        return ConApp{std::move(constructor), std::move(args)};
    }
    static Term binder(std::string var, Term body) { return Binder{std::move(var), std::move(body)}; }
    static Term subst(Term body, Term replacement, std::string var)
    {
        return Subst{std::move(body), std::move(replacement), std::move(var)};
    }
    static Term hole() { return Hole{}; }
    static Term str(std::string value) { return StrLit{std::move(value)}; }

    const Node& node() const { return node_; }

    template <typename T>
    bool is() const { return std::holds_alternative<T>(node_); }
    template <typename T>
    const T* as() const { return std::get_if<T>(&node_); }

    bool operator==(const Term&) const = default;

private:
    Node node_;
};

inline bool ConApp::operator==(const ConApp& o) const { return constructor == o.constructor && args == o.args; }
inline bool Binder::operator==(const Binder& o) const { return bound_var == o.bound_var && body == o.body; }
inline bool Subst::operator==(const Subst& o) const
{
    return body == o.body && replacement == o.replacement && var == o.var;
}

/// Reserved predicate names with built-in surface syntax.
inline constexpr std::string_view kTypingPredicate = "typing";
inline constexpr std::string_view kSubtypePredicate = "subtype";
inline constexpr std::string_view kStepPredicate = "step";

/// Constructor used to pack a configuration `t , s1 , ... , sm` into one term.
/// The `.lan` lexer cannot produce it, so it never clashes with user constructors.
inline constexpr std::string_view kConfigConstructor = "<config>";

struct Formula {
    std::string predicate;
    std::vector<Term> args;
    bool operator==(const Formula&) const = default;
};

struct Config {
    Term subject;
    std::vector<Term> state;
    bool operator==(const Config&) const = default;
};

struct Step {
    Config source;
    Config target;
};

Term make_config_term(const Config& c);
Formula make_step(const Config& source, const Config& target);
Formula make_typing(Term env, Term subject, Term type);
Formula make_subtype(Term lhs, Term rhs);

/// Views a `step` formula as source/target configurations; nullopt for any other formula.
std::optional<Step> as_step(const Formula& f);

/// Structural equality; binder variables are compared literally.
bool term_equal(const Term& a, const Term& b);

/// Number of subterm positions of `haystack` structurally equal to `needle`.
std::size_t count_occurrences(const Term& haystack, const Term& needle);

/// True iff some substitution node in `haystack` has a replacement containing `needle`.
bool contains_subst_involving(const Term& haystack, const Term& needle);

std::optional<std::string> top_constructor(const Term& t);

class NotAConApp : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Maps a metavariable occurrence spelling (e.g. `e2`) to its declared metavariable, if any.
using MetaVarResolver = std::function<std::optional<std::string>(std::string_view)>;

/// 1-based positions of arguments of `t` that are occurrences of metavariable `mv`.
/// Throws NotAConApp when `t` is not a constructor application.
std::set<unsigned> get_args_positions(const Term& t, std::string_view mv, const MetaVarResolver& resolve);

/// Calls `fn` on every user constructor application in `t` (pre-order), skipping config packing.
void for_each_conapp(const Term& t, const std::function<void(const ConApp&)>& fn);

/// `.lan` rendering. Nullary constructors whose spelling `is_metavar_spelling` accepts are
/// parenthesized so they reparse as constructors.
std::string to_string(const Term& t, const std::function<bool(std::string_view)>& is_metavar_spelling = {});
std::string to_string(const Formula& f, const std::function<bool(std::string_view)>& is_metavar_spelling = {});

}  // namespace langlogic
