// A small expression language over the two algebras, so the command line can
// evaluate user-supplied identities.
//
//   expr   := ["+"|"-"] term { ("+"|"-") term }
//   term   := factor { "*" factor }
//   factor := atom [ "^" int ]
//   atom   := gen | call | number | "q" | "(" expr ")"
//   gen    := ("E"|"F"|"Kt"|"Ktp"|"B"|"k") "[" noderef "]"
//   call   := name "(" arg { "," arg } ")"
//   name   in { idp, dp, y, yp, fplus, qbinom, qint }
//   arg    := expr | "even" | "odd" | "E" | "F"
#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "iqg/drinfeld.hpp"
#include "iqg/iexpr.hpp"

namespace iqg {

enum class GenKind { E, F, Kt, Ktp, B, k };
enum class CallName { idp, dp, y, yp, fplus, qbinom, qint };

struct Ast;
using AstPtr = std::shared_ptr<const Ast>;

struct Ast {
    enum class Kind { Sum, Prod, Pow, Num, Q, Gen, Call, ParityLit, SideLit };
    Kind kind;
    std::vector<AstPtr> kids;  // Sum/Prod children, Pow base, Call arguments
    std::vector<int> signs;    // Sum: +1/-1 per child
    long ipow = 0;             // Pow exponent
    mpz_class num;             // Num literal
    GenKind gen = GenKind::E;  // Gen
    std::string node;          // Gen node reference
    CallName call = CallName::qint;
    int parity = 0;            // ParityLit: 0 even, 1 odd
    Side side = Side::E;       // SideLit
};

struct DslParseError : std::runtime_error {
    size_t pos;
    std::string expected;
    DslParseError(size_t p, std::string exp, const std::string& what)
        : std::runtime_error(what), pos(p), expected(std::move(exp)) {}
};

struct DslEvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

AstPtr parse_expr(std::string_view text);
std::string render(const AstPtr& a);

// true when the expression can only live in the Drinfeld double
bool mentions_dd_generators(const AstPtr& a);

QScalar eval_scalar(const AstPtr& a);
// evaluates with B/k generators embedded; E/F/Kt/Ktp taken directly
DDElement eval_dd(const AstPtr& a, const DatumPtr& d);
// evaluates in the B/k normal form; rejects E/F/Kt/Ktp and fplus/dp-sides
IExpr eval_iexpr(const AstPtr& a, const DatumPtr& d);

}  // namespace iqg
