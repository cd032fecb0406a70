#include "iqg/exprdsl.hpp"

#include <cctype>
#include <sstream>

namespace iqg {

namespace {

struct Parser {
    std::string_view s;
    size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    bool eat(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& expected) {
        throw DslParseError(i, expected,
                            "parse error at offset " + std::to_string(i) +
                                ": expected " + expected);
    }

    std::string ident() {
        skip_ws();
        size_t start = i;
        while (i < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            ++i;
        if (start == i) fail("identifier");
        return std::string(s.substr(start, i - start));
    }

    long integer() {
        skip_ws();
        bool neg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
        skip_ws();
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
            fail("integer");
        long v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            v = v * 10 + (s[i++] - '0');
        return neg ? -v : v;
    }

    AstPtr expr() {
        auto out = std::make_shared<Ast>();
        out->kind = Ast::Kind::Sum;
        int sign = 1;
        if (eat('-')) sign = -1;
        else eat('+');
        out->kids.push_back(term());
        out->signs.push_back(sign);
        while (true) {
            char c = peek();
            if (c == '+') {
                ++i;
                out->kids.push_back(term());
                out->signs.push_back(1);
            } else if (c == '-') {
                ++i;
                out->kids.push_back(term());
                out->signs.push_back(-1);
            } else {
                break;
            }
        }
        if (out->kids.size() == 1 && out->signs[0] == 1) return out->kids[0];
        return out;
    }

    AstPtr term() {
        auto out = std::make_shared<Ast>();
        out->kind = Ast::Kind::Prod;
        out->kids.push_back(factor());
        while (eat('*')) out->kids.push_back(factor());
        if (out->kids.size() == 1) return out->kids[0];
        return out;
    }

    AstPtr factor() {
        AstPtr base = atom();
        skip_ws();
        if (eat('^')) {
            auto out = std::make_shared<Ast>();
            out->kind = Ast::Kind::Pow;
            out->kids.push_back(base);
            out->ipow = integer();
            return out;
        }
        return base;
    }

    AstPtr arg() {
        skip_ws();
        size_t save = i;
        if (std::isalpha(static_cast<unsigned char>(peek()))) {
            std::string word = ident();
            if (word == "even" || word == "odd") {
                auto out = std::make_shared<Ast>();
                out->kind = Ast::Kind::ParityLit;
                out->parity = word == "odd" ? 1 : 0;
                return out;
            }
            if ((word == "E" || word == "F") && peek() != '[') {
                auto out = std::make_shared<Ast>();
                out->kind = Ast::Kind::SideLit;
                out->side = word == "E" ? Side::E : Side::F;
                return out;
            }
            i = save;
        }
        return expr();
    }

    AstPtr atom() {
        skip_ws();
        if (eat('(')) {
            AstPtr inner = expr();
            if (!eat(')')) fail("')'");
            return inner;
        }
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            auto out = std::make_shared<Ast>();
            out->kind = Ast::Kind::Num;
            size_t start = i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                ++i;
            out->num = mpz_class(std::string(s.substr(start, i - start)));
            return out;
        }
        if (!std::isalpha(static_cast<unsigned char>(c))) fail("atom");
        std::string word = ident();
        if (word == "q" && peek() != '[' && peek() != '(') {
            auto out = std::make_shared<Ast>();
            out->kind = Ast::Kind::Q;
            return out;
        }
        static const std::pair<const char*, GenKind> gens[] = {
            {"E", GenKind::E},   {"F", GenKind::F}, {"Kt", GenKind::Kt},
            {"Ktp", GenKind::Ktp}, {"B", GenKind::B}, {"k", GenKind::k}};
        for (const auto& [name, kind] : gens) {
            if (word == name) {
                if (!eat('[')) fail("'[' after generator");
                skip_ws();
                size_t start = i;
                while (i < s.size() && s[i] != ']') ++i;
                if (i >= s.size()) fail("']'");
                std::string node(s.substr(start, i - start));
                ++i;
                while (!node.empty() && std::isspace(static_cast<unsigned char>(
                                            node.back())))
                    node.pop_back();
                auto out = std::make_shared<Ast>();
                out->kind = Ast::Kind::Gen;
                out->gen = kind;
                out->node = node;
                return out;
            }
        }
        static const std::pair<const char*, CallName> calls[] = {
            {"idp", CallName::idp},     {"dp", CallName::dp},
            {"y", CallName::y},         {"yp", CallName::yp},
            {"fplus", CallName::fplus}, {"qbinom", CallName::qbinom},
            {"qint", CallName::qint}};
        for (const auto& [name, call] : calls) {
            if (word == name) {
                if (!eat('(')) fail("'(' after call name");
                auto out = std::make_shared<Ast>();
                out->kind = Ast::Kind::Call;
                out->call = call;
                if (peek() != ')') {
                    out->kids.push_back(arg());
                    while (eat(',')) out->kids.push_back(arg());
                }
                if (!eat(')')) fail("')'");
                return out;
            }
        }
        fail("generator, call, number, or q");
    }
};

const char* call_name(CallName c) {
    switch (c) {
        case CallName::idp: return "idp";
        case CallName::dp: return "dp";
        case CallName::y: return "y";
        case CallName::yp: return "yp";
        case CallName::fplus: return "fplus";
        case CallName::qbinom: return "qbinom";
        default: return "qint";
    }
}

const char* gen_name(GenKind g) {
    switch (g) {
        case GenKind::E: return "E";
        case GenKind::F: return "F";
        case GenKind::Kt: return "Kt";
        case GenKind::Ktp: return "Ktp";
        case GenKind::B: return "B";
        default: return "k";
    }
}

void render_rec(const AstPtr& a, std::ostringstream& os, int parent_prec) {
    // precedence: sum 0, product 1, power 2, atoms 3
    switch (a->kind) {
        case Ast::Kind::Sum: {
            bool need = parent_prec > 0;
            if (need) os << "(";
            for (size_t t = 0; t < a->kids.size(); ++t) {
                if (t == 0) {
                    if (a->signs[t] < 0) os << "-";
                } else {
                    os << (a->signs[t] < 0 ? "-" : "+");
                }
                render_rec(a->kids[t], os, 1);
            }
            if (need) os << ")";
            break;
        }
        case Ast::Kind::Prod: {
            bool need = parent_prec > 1;
            if (need) os << "(";
            for (size_t t = 0; t < a->kids.size(); ++t) {
                if (t) os << "*";
                render_rec(a->kids[t], os, 2);
            }
            if (need) os << ")";
            break;
        }
        case Ast::Kind::Pow:
            if (a->ipow == 1) {
                render_rec(a->kids[0], os, parent_prec);
            } else {
                render_rec(a->kids[0], os, 3);
                os << "^" << a->ipow;
            }
            break;
        case Ast::Kind::Num:
            os << a->num.get_str();
            break;
        case Ast::Kind::Q:
            os << "q";
            break;
        case Ast::Kind::Gen:
            os << gen_name(a->gen) << "[" << a->node << "]";
            break;
        case Ast::Kind::ParityLit:
            os << (a->parity ? "odd" : "even");
            break;
        case Ast::Kind::SideLit:
            os << (a->side == Side::E ? "E" : "F");
            break;
        case Ast::Kind::Call:
            os << call_name(a->call) << "(";
            for (size_t t = 0; t < a->kids.size(); ++t) {
                if (t) os << ",";
                render_rec(a->kids[t], os, 0);
            }
            os << ")";
            break;
    }
}

long scalar_to_long(const AstPtr& a, const char* what) {
    QScalar v = eval_scalar(a);
    auto [n, den] = v.normalized();
    if (!den.is_one() || (!n.is_zero() && (n.low() != 0 || n.high() != 0)))
        throw DslEvalError(std::string("argument must be an integer: ") + what);
    mpq_class c = n.is_zero() ? mpq_class(0) : n.coeff(0);
    if (c.get_den() != 1) throw DslEvalError(std::string("argument must be an integer: ") + what);
    if (!c.get_num().fits_slong_p())
        throw DslEvalError(std::string("argument out of range: ") + what);
    return c.get_num().get_si();
}

Parity parity_arg(const AstPtr& a) {
    if (a->kind == Ast::Kind::ParityLit) return Parity{a->parity};
    return parity_of(scalar_to_long(a, "parity"));
}

int node_arg(const AstPtr& a, const DatumPtr& d) {
    if (a->kind == Ast::Kind::Gen) return d->resolve_node(a->node);
    std::ostringstream os;
    render_rec(a, os, 0);
    return d->resolve_node(os.str());
}

}  // namespace

AstPtr parse_expr(std::string_view text) {
    Parser p{text};
    AstPtr out = p.expr();
    p.skip_ws();
    if (p.i != text.size()) p.fail("end of input");
    return out;
}

std::string render(const AstPtr& a) {
    std::ostringstream os;
    render_rec(a, os, 0);
    return os.str();
}

bool mentions_dd_generators(const AstPtr& a) {
    switch (a->kind) {
        case Ast::Kind::Gen:
            return a->gen == GenKind::E || a->gen == GenKind::F ||
                   a->gen == GenKind::Kt || a->gen == GenKind::Ktp;
        case Ast::Kind::Call:
            if (a->call == CallName::fplus || a->call == CallName::dp) return true;
            [[fallthrough]];
        default:
            for (const auto& k : a->kids)
                if (mentions_dd_generators(k)) return true;
            return false;
    }
}

QScalar eval_scalar(const AstPtr& a) {
    switch (a->kind) {
        case Ast::Kind::Sum: {
            QScalar out;
            for (size_t t = 0; t < a->kids.size(); ++t) {
                QScalar v = eval_scalar(a->kids[t]);
                if (a->signs[t] < 0) out -= v;
                else out += v;
            }
            return out;
        }
        case Ast::Kind::Prod: {
            QScalar out(1);
            for (const auto& k : a->kids) out *= eval_scalar(k);
            return out;
        }
        case Ast::Kind::Pow: {
            QScalar base = eval_scalar(a->kids[0]);
            QScalar out(1);
            for (long t = 0; t < std::abs(a->ipow); ++t)
                out = a->ipow > 0 ? out * base : out / base;
            return out;
        }
        case Ast::Kind::Num:
            return QScalar(mpq_class(a->num));
        case Ast::Kind::Q:
            return QScalar::q_power(1);
        case Ast::Kind::Call:
            if (a->call == CallName::qint) {
                if (a->kids.size() < 1 || a->kids.size() > 2)
                    throw DslEvalError("qint expects (n[, eps])");
                long n = scalar_to_long(a->kids[0], "qint n");
                long eps = a->kids.size() == 2 ? scalar_to_long(a->kids[1], "eps") : 1;
                return qint(n, eps);
            }
            if (a->call == CallName::qbinom) {
                if (a->kids.size() < 2 || a->kids.size() > 3)
                    throw DslEvalError("qbinom expects (n, d[, eps])");
                long n = scalar_to_long(a->kids[0], "qbinom n");
                long dd = scalar_to_long(a->kids[1], "qbinom d");
                long eps = a->kids.size() == 3 ? scalar_to_long(a->kids[2], "eps") : 1;
                return qbinom(n, dd, eps);
            }
            throw DslEvalError("call is not scalar-valued");
        default:
            throw DslEvalError("expected a scalar expression");
    }
}

namespace {

bool is_scalar_ast(const AstPtr& a) {
    switch (a->kind) {
        case Ast::Kind::Num:
        case Ast::Kind::Q:
            return true;
        case Ast::Kind::Gen:
        case Ast::Kind::ParityLit:
        case Ast::Kind::SideLit:
            return false;
        case Ast::Kind::Call:
            return a->call == CallName::qint || a->call == CallName::qbinom;
        default:
            for (const auto& k : a->kids)
                if (!is_scalar_ast(k)) return false;
            return true;
    }
}

YParams y_args(const AstPtr& a, const DatumPtr& d) {
    if (a->kids.size() != 7)
        throw DslEvalError("y/yp expects (i, j, n, m, parity, parity, e)");
    YParams p;
    p.i = node_arg(a->kids[0], d);
    p.j = node_arg(a->kids[1], d);
    p.n = scalar_to_long(a->kids[2], "n");
    p.m = scalar_to_long(a->kids[3], "m");
    p.pbar = parity_arg(a->kids[4]);
    p.tbar = parity_arg(a->kids[5]);
    long e = scalar_to_long(a->kids[6], "e");
    if (e != 1 && e != -1) throw DslEvalError("e must be +1 or -1");
    p.e = static_cast<int>(e);
    return p;
}

}  // namespace

IExpr eval_iexpr(const AstPtr& a, const DatumPtr& d) {
    if (is_scalar_ast(a)) return IExpr::one(d) * eval_scalar(a);
    switch (a->kind) {
        case Ast::Kind::Sum: {
            IExpr out(d);
            for (size_t t = 0; t < a->kids.size(); ++t) {
                IExpr v = eval_iexpr(a->kids[t], d);
                if (a->signs[t] < 0) out -= v;
                else out += v;
            }
            return out;
        }
        case Ast::Kind::Prod: {
            IExpr out = IExpr::one(d);
            for (const auto& k : a->kids) {
                if (is_scalar_ast(k)) out *= eval_scalar(k);
                else out = out * eval_iexpr(k, d);
            }
            return out;
        }
        case Ast::Kind::Pow: {
            if (a->ipow < 0) {
                // negative powers only for the central k generators
                if (a->kids[0]->kind == Ast::Kind::Gen &&
                    a->kids[0]->gen == GenKind::k)
                    return IExpr::gen_k(d, node_arg(a->kids[0], d),
                                        static_cast<int>(a->ipow));
                throw DslEvalError("negative power of a non-invertible element");
            }
            IExpr base = eval_iexpr(a->kids[0], d);
            IExpr out = IExpr::one(d);
            for (long t = 0; t < a->ipow; ++t) out = out * base;
            return out;
        }
        case Ast::Kind::Gen:
            if (a->gen == GenKind::B) return IExpr::gen_B(d, node_arg(a, d));
            if (a->gen == GenKind::k) return IExpr::gen_k(d, node_arg(a, d));
            throw DslEvalError("generator " + std::string(gen_name(a->gen)) +
                               " is not an i-algebra element");
        case Ast::Kind::Call:
            if (a->call == CallName::idp) {
                if (a->kids.size() != 3)
                    throw DslEvalError("idp expects (i, m, parity)");
                return idivided_power(d, node_arg(a->kids[0], d),
                                      scalar_to_long(a->kids[1], "m"),
                                      parity_arg(a->kids[2]));
            }
            if (a->call == CallName::dp) {
                if (a->kids.size() != 2)
                    throw DslEvalError("dp in the i-algebra expects (i, n)");
                int i = node_arg(a->kids[0], d);
                long n = scalar_to_long(a->kids[1], "n");
                if (n < 0) return IExpr(d);
                IExpr out = IExpr::one(d);
                for (long t = 0; t < n; ++t) out = out * IExpr::gen_B(d, i);
                QScalar inv(1);
                inv.div_qfact(n, d->eps_of(i));
                return out * inv;
            }
            if (a->call == CallName::y || a->call == CallName::yp)
                return ytilde(d, y_args(a, d), a->call == CallName::yp);
            throw DslEvalError("call not available in the i-algebra");
        default:
            throw DslEvalError("cannot evaluate expression in the i-algebra");
    }
}

DDElement eval_dd(const AstPtr& a, const DatumPtr& d) {
    if (is_scalar_ast(a)) return DDElement::one(d) * eval_scalar(a);
    switch (a->kind) {
        case Ast::Kind::Sum: {
            DDElement out(d);
            for (size_t t = 0; t < a->kids.size(); ++t) {
                DDElement v = eval_dd(a->kids[t], d);
                if (a->signs[t] < 0) out -= v;
                else out += v;
            }
            return out;
        }
        case Ast::Kind::Prod: {
            DDElement out = DDElement::one(d);
            for (const auto& k : a->kids) {
                if (is_scalar_ast(k)) out *= eval_scalar(k);
                else out = out * eval_dd(k, d);
            }
            return out;
        }
        case Ast::Kind::Pow: {
            if (a->ipow < 0) {
                if (a->kids[0]->kind == Ast::Kind::Gen) {
                    int node = node_arg(a->kids[0], d);
                    int e = static_cast<int>(a->ipow);
                    switch (a->kids[0]->gen) {
                        case GenKind::Kt: return DDElement::gen_Kt(d, node, e);
                        case GenKind::Ktp: return DDElement::gen_Ktp(d, node, e);
                        case GenKind::k:
                            return embed(IExpr::gen_k(d, node, e));
                        default: break;
                    }
                }
                throw DslEvalError("negative power of a non-invertible element");
            }
            DDElement base = eval_dd(a->kids[0], d);
            DDElement out = DDElement::one(d);
            for (long t = 0; t < a->ipow; ++t) out = out * base;
            return out;
        }
        case Ast::Kind::Gen: {
            int node = node_arg(a, d);
            switch (a->gen) {
                case GenKind::E: return DDElement::gen_E(d, node);
                case GenKind::F: return DDElement::gen_F(d, node);
                case GenKind::Kt: return DDElement::gen_Kt(d, node);
                case GenKind::Ktp: return DDElement::gen_Ktp(d, node);
                case GenKind::B: return embed(IExpr::gen_B(d, node));
                default: return embed(IExpr::gen_k(d, node));
            }
        }
        case Ast::Kind::Call:
            if (a->call == CallName::fplus) {
                if (a->kids.size() < 5 || a->kids.size() > 6)
                    throw DslEvalError("fplus expects (i, j, n, m, e[, side])");
                int i = node_arg(a->kids[0], d);
                int j = node_arg(a->kids[1], d);
                long n = scalar_to_long(a->kids[2], "n");
                long m = scalar_to_long(a->kids[3], "m");
                long e = scalar_to_long(a->kids[4], "e");
                if (e != 1 && e != -1) throw DslEvalError("e must be +1 or -1");
                Side side = Side::E;
                if (a->kids.size() == 6) {
                    if (a->kids[5]->kind != Ast::Kind::SideLit)
                        throw DslEvalError("fplus side must be E or F");
                    side = a->kids[5]->side;
                }
                return f_classical(d, i, j, n, m, static_cast<int>(e), side);
            }
            if (a->call == CallName::dp) {
                if (a->kids.size() == 3) {
                    if (a->kids[2]->kind != Ast::Kind::SideLit)
                        throw DslEvalError("dp side must be E or F");
                    return divided_power(d, node_arg(a->kids[0], d),
                                         scalar_to_long(a->kids[1], "n"),
                                         a->kids[2]->side);
                }
                return embed(eval_iexpr(a, d));
            }
            return embed(eval_iexpr(a, d));
        default:
            return embed(eval_iexpr(a, d));
    }
}

}  // namespace iqg
