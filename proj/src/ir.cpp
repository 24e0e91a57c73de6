#include "regsolve/ir.hpp"

#include <stdexcept>

namespace regsolve {

namespace {
std::shared_ptr<TermNode> fresh_term(TermNode::Kind k) {
    auto t = std::make_shared<TermNode>();
    t->kind = k;
    return t;
}
std::shared_ptr<IrNode> fresh_ir(IrNode::Kind k) {
    auto n = std::make_shared<IrNode>();
    n->kind = k;
    return n;
}
}  // namespace

Term term_lit(Text value) {
    auto t = fresh_term(TermNode::Kind::Lit);
    t->lit = std::move(value);
    return t;
}

Term term_var(std::string name) {
    auto t = fresh_term(TermNode::Kind::Var);
    t->name = std::move(name);
    return t;
}

Term term_cap_value(std::string capture) {
    auto t = fresh_term(TermNode::Kind::CapValue);
    t->name = std::move(capture);
    return t;
}

Term term_concat(std::vector<Term> parts) {
    if (parts.size() == 1) return parts[0];
    auto t = fresh_term(TermNode::Kind::Concat);
    for (auto& p : parts) {
        if (p->kind == TermNode::Kind::Concat) {
            for (const auto& q : p->parts) t->parts.push_back(q);
        } else if (p->kind == TermNode::Kind::Lit && p->lit.empty()) {
            continue;
        } else {
            t->parts.push_back(std::move(p));
        }
    }
    if (t->parts.empty()) return term_lit(Text{});
    if (t->parts.size() == 1) return t->parts[0];
    return t;
}

Ir ir_true() { return fresh_ir(IrNode::Kind::True); }
Ir ir_false() { return fresh_ir(IrNode::Kind::False); }

Ir ir_str_eq(Term lhs, Term rhs) {
    auto n = fresh_ir(IrNode::Kind::StrEq);
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

Ir ir_len_eq(Term subject, size_t len) {
    auto n = fresh_ir(IrNode::Kind::LenEq);
    n->subject = std::move(subject);
    n->len = len;
    return n;
}

Ir ir_in_re(Term subject, CRegexPtr re) {
    auto n = fresh_ir(IrNode::Kind::InRe);
    n->subject = std::move(subject);
    n->re = std::move(re);
    return n;
}

Ir ir_not_in_re(Term subject, CRegexPtr re) {
    auto n = fresh_ir(IrNode::Kind::NotInRe);
    n->subject = std::move(subject);
    n->re = std::move(re);
    return n;
}

Ir ir_cap_undef(std::string capture) {
    auto n = fresh_ir(IrNode::Kind::CapUndef);
    n->cap = std::move(capture);
    return n;
}

Ir ir_cap_eq(std::string capture, Term value) {
    auto n = fresh_ir(IrNode::Kind::CapEq);
    n->cap = std::move(capture);
    n->lhs = std::move(value);
    return n;
}

Ir ir_and(std::vector<Ir> kids) {
    auto n = fresh_ir(IrNode::Kind::And);
    for (auto& k : kids) {
        if (k->kind == IrNode::Kind::True) continue;
        if (k->kind == IrNode::Kind::False) return ir_false();
        if (k->kind == IrNode::Kind::And) {
            for (const auto& g : k->kids) n->kids.push_back(g);
        } else {
            n->kids.push_back(std::move(k));
        }
    }
    if (n->kids.empty()) return ir_true();
    if (n->kids.size() == 1) return n->kids[0];
    return n;
}

Ir ir_or(std::vector<Ir> kids) {
    auto n = fresh_ir(IrNode::Kind::Or);
    for (auto& k : kids) {
        if (k->kind == IrNode::Kind::False) continue;
        if (k->kind == IrNode::Kind::True) return ir_true();
        if (k->kind == IrNode::Kind::Or) {
            for (const auto& g : k->kids) n->kids.push_back(g);
        } else {
            n->kids.push_back(std::move(k));
        }
    }
    if (n->kids.empty()) return ir_false();
    if (n->kids.size() == 1) return n->kids[0];
    return n;
}

Ir ir_not(Ir inner) {
    if (inner->kind == IrNode::Kind::True) return ir_false();
    if (inner->kind == IrNode::Kind::False) return ir_true();
    if (inner->kind == IrNode::Kind::Not) return inner->kids[0];
    auto n = fresh_ir(IrNode::Kind::Not);
    n->kids.push_back(std::move(inner));
    return n;
}

Ir ir_implies(Ir premise, Ir conclusion) {
    if (premise->kind == IrNode::Kind::True) return conclusion;
    if (premise->kind == IrNode::Kind::False) return ir_true();
    auto n = fresh_ir(IrNode::Kind::Implies);
    n->kids.push_back(std::move(premise));
    n->kids.push_back(std::move(conclusion));
    return n;
}

Ir ir_cap_eq_cap(const std::string& a, const std::string& b) {
    return ir_or({ir_and({ir_cap_undef(a), ir_cap_undef(b)}),
                  ir_and({ir_not(ir_cap_undef(a)), ir_not(ir_cap_undef(b)),
                          ir_str_eq(term_cap_value(a), term_cap_value(b))})});
}

namespace {

void render_term(std::string& out, const Term& t) {
    switch (t->kind) {
        case TermNode::Kind::Lit: out += '"' + to_utf8(t->lit) + '"'; return;
        case TermNode::Kind::Var: out += t->name; return;
        case TermNode::Kind::CapValue: out += "val(" + t->name + ")"; return;
        case TermNode::Kind::Concat:
            for (size_t i = 0; i < t->parts.size(); ++i) {
                if (i) out += " ++ ";
                render_term(out, t->parts[i]);
            }
            return;
    }
}

void render_ir(std::string& out, const Ir& n, int depth) {
    auto join = [&](const char* op) {
        out += "(";
        for (size_t i = 0; i < n->kids.size(); ++i) {
            if (i) out += op;
            render_ir(out, n->kids[i], depth + 1);
        }
        out += ")";
    };
    switch (n->kind) {
        case IrNode::Kind::True: out += "true"; return;
        case IrNode::Kind::False: out += "false"; return;
        case IrNode::Kind::StrEq:
            render_term(out, n->lhs);
            out += " = ";
            render_term(out, n->rhs);
            return;
        case IrNode::Kind::LenEq:
            out += "|";
            render_term(out, n->subject);
            out += "| = " + std::to_string(n->len);
            return;
        case IrNode::Kind::InRe:
            render_term(out, n->subject);
            out += " in " + cregex_to_string(n->re);
            return;
        case IrNode::Kind::NotInRe:
            render_term(out, n->subject);
            out += " notin " + cregex_to_string(n->re);
            return;
        case IrNode::Kind::CapUndef: out += n->cap + " = undef"; return;
        case IrNode::Kind::CapEq:
            out += n->cap + " := ";
            render_term(out, n->lhs);
            return;
        case IrNode::Kind::And: join(" & "); return;
        case IrNode::Kind::Or: join(" | "); return;
        case IrNode::Kind::Not:
            out += "!(";
            render_ir(out, n->kids[0], depth + 1);
            out += ")";
            return;
        case IrNode::Kind::Implies:
            out += "(";
            render_ir(out, n->kids[0], depth + 1);
            out += " => ";
            render_ir(out, n->kids[1], depth + 1);
            out += ")";
            return;
    }
}

}  // namespace

std::string ir_to_string(const Ir& ir) {
    std::string out;
    render_ir(out, ir, 0);
    return out;
}

bool ConstraintProblem::has_string_var(const std::string& name) const {
    for (const auto& v : string_vars)
        if (v.name == name) return true;
    return false;
}

bool ConstraintProblem::has_capture_var(const std::string& name) const {
    for (const auto& v : capture_vars)
        if (v == name) return true;
    return false;
}

void ConstraintProblem::declare_string(std::string name, std::optional<size_t> max_len) {
    string_vars.push_back({std::move(name), max_len});
}

void ConstraintProblem::declare_capture(std::string name) {
    capture_vars.push_back(std::move(name));
}

std::string ConstraintProblem::fresh_word(const std::string& stem) {
    std::string name = stem + "." + std::to_string(fresh_counter++);
    declare_string(name);
    return name;
}

std::string ConstraintProblem::fresh_capture(const std::string& stem) {
    std::string name = stem + "." + std::to_string(fresh_counter++);
    declare_capture(name);
    return name;
}

Text eval_term(const Term& term, const Assignment& a) {
    switch (term->kind) {
        case TermNode::Kind::Lit:
            return term->lit;
        case TermNode::Kind::Var: {
            auto it = a.strings.find(term->name);
            if (it == a.strings.end())
                throw std::runtime_error("unassigned string variable " + term->name);
            return it->second;
        }
        case TermNode::Kind::CapValue: {
            auto it = a.captures.find(term->name);
            if (it == a.captures.end())
                throw std::runtime_error("unassigned capture variable " + term->name);
            return it->second.value_or(Text{});
        }
        case TermNode::Kind::Concat: {
            Text out;
            for (const auto& p : term->parts) out += eval_term(p, a);
            return out;
        }
    }
    return {};
}

bool eval_ir(const Ir& ir, const Assignment& a) {
    switch (ir->kind) {
        case IrNode::Kind::True: return true;
        case IrNode::Kind::False: return false;
        case IrNode::Kind::StrEq: return eval_term(ir->lhs, a) == eval_term(ir->rhs, a);
        case IrNode::Kind::LenEq: return eval_term(ir->subject, a).size() == ir->len;
        case IrNode::Kind::InRe: return cregex_member(ir->re, eval_term(ir->subject, a));
        case IrNode::Kind::NotInRe: return !cregex_member(ir->re, eval_term(ir->subject, a));
        case IrNode::Kind::CapUndef: {
            auto it = a.captures.find(ir->cap);
            if (it == a.captures.end())
                throw std::runtime_error("unassigned capture variable " + ir->cap);
            return !it->second.has_value();
        }
        case IrNode::Kind::CapEq: {
            auto it = a.captures.find(ir->cap);
            if (it == a.captures.end())
                throw std::runtime_error("unassigned capture variable " + ir->cap);
            return it->second.has_value() && *it->second == eval_term(ir->lhs, a);
        }
        case IrNode::Kind::And:
            for (const auto& k : ir->kids)
                if (!eval_ir(k, a)) return false;
            return true;
        case IrNode::Kind::Or:
            for (const auto& k : ir->kids)
                if (eval_ir(k, a)) return true;
            return false;
        case IrNode::Kind::Not: return !eval_ir(ir->kids[0], a);
        case IrNode::Kind::Implies: return !eval_ir(ir->kids[0], a) || eval_ir(ir->kids[1], a);
    }
    return false;
}

bool eval_problem(const ConstraintProblem& problem, const Assignment& a) {
    for (const auto& ir : problem.assertions)
        if (!eval_ir(ir, a)) return false;
    return true;
}

}  // namespace regsolve
