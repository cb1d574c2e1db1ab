#include "tdlc/finite/finite_universe.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace tdlc::finite {

IndexOrInfinite FiniteUniverse::index(const Subgroup& a, const Subgroup& b) const {
    if (!subset(b, a)) throw InputError("index: second subgroup not contained in first");
    if (a.size() % b.size() != 0) throw std::logic_error("index: Lagrange violation");
    return IndexOrInfinite::of(Index(a.size() / b.size()));
}

Certified<FiniteUniverse::Subgroup> FiniteUniverse::join(const Subgroup& a, const Subgroup& b,
                                                         const Horizon&) const {
    std::vector<Elt> gens(a);
    gens.insert(gens.end(), b.begin(), b.end());
    return {closure(*g_, gens), Certificate::exact()};
}

Certified<FiniteUniverse::Subgroup> FiniteUniverse::product_with(const Subgroup& a,
                                                                 const Subgroup& b,
                                                                 const Horizon&) const {
    Subgroup p = product_set(*g_, a, b);
    if (!is_subgroup(*g_, p)) throw std::logic_error("product_with: product set is not a subgroup");
    return {std::move(p), Certificate::exact()};
}

FiniteUniverse::Subgroup FiniteUniverse::tilde(const Subgroup& v, const Subgroup& l) const {
    Subgroup lv = product_set(*g_, l, v);
    Subgroup r;
    for (Elt x : v) {
        bool ok = true;
        for (Elt y : l)
            if (!finite::member(lv, g_->mul(x, y))) {
                ok = false;
                break;
            }
        if (ok) r.push_back(x);
    }
    return r;
}

std::string FiniteUniverse::describe(const Subgroup& s) const {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < s.size() && i < 12; ++i) os << (i ? "," : "") << g_->label(s[i]);
    if (s.size() > 12) os << ",...";
    os << "} (order " << s.size() << ')';
    return os.str();
}

Certified<FiniteUniverse::Subgroup> FiniteUniverse::limit_decreasing(const Subgroup& first,
                                                                    const ChainStep& step,
                                                                    const Horizon& h) const {
    Subgroup cur = first;
    /* a strictly decreasing subgroup chain halves the order each step, so
       the loop ends long before any reasonable horizon */
    int bound = std::max(h.fixpoint, 2 * g_->order());
    for (int n = 0; n < bound; ++n) {
        Subgroup next = step(n, cur);
        if (next == cur) return {cur, Certificate::exact("fixpoint at step " + std::to_string(n))};
        cur = std::move(next);
    }
    throw std::logic_error("finite decreasing chain failed to stabilize");
}

Certified<FiniteUniverse::Subgroup> FiniteUniverse::limit_increasing(const Subgroup& first,
                                                                    const ChainStep& step,
                                                                    const Horizon& h) const {
    Subgroup cur = first;
    int bound = std::max(h.fixpoint, 2 * g_->order());
    for (int n = 0; n < bound; ++n) {
        Subgroup next = step(n, cur);
        if (next == cur) return {cur, Certificate::exact("fixpoint at step " + std::to_string(n))};
        cur = std::move(next);
    }
    throw std::logic_error("finite increasing chain failed to stabilize");
}

std::vector<FiniteUniverse::Subgroup> FiniteUniverse::all_subgroups(int order_bound) const {
    if (g_->order() > order_bound) throw CapabilityError("subgroup enumeration bound exceeded");
    std::set<Subgroup> known;
    known.insert(trivial(*g_));
    std::vector<Subgroup> cyclics;
    for (Elt x = 0; x < g_->order(); ++x) cyclics.push_back(closure(*g_, {x}));
    for (const auto& c : cyclics) known.insert(c);
    /* saturate under join-with-cyclic; every subgroup is a join of cyclics */
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Subgroup> snapshot(known.begin(), known.end());
        for (const auto& s : snapshot)
            for (const auto& c : cyclics) {
                if (subset(c, s)) continue;
                std::vector<Elt> gens(s);
                gens.insert(gens.end(), c.begin(), c.end());
                Subgroup j = closure(*g_, gens);
                if (known.insert(j).second) grew = true;
            }
    }
    return {known.begin(), known.end()};
}

std::vector<Elt> FiniteUniverse::generating_set() const {
    const int n = g_->order();
    if (n == 1) return {};
    for (Elt a = 0; a < n; ++a)
        if (static_cast<int>(closure(*g_, {a}).size()) == n) return {a};
    for (Elt a = 0; a < n; ++a)
        for (Elt b = a + 1; b < n; ++b)
            if (static_cast<int>(closure(*g_, {a, b}).size()) == n) return {a, b};
    for (Elt a = 0; a < n; ++a)
        for (Elt b = a + 1; b < n; ++b)
            for (Elt c = b + 1; c < n; ++c)
                if (static_cast<int>(closure(*g_, {a, b, c}).size()) == n) return {a, b, c};
    throw CapabilityError("group needs more than 3 generators");
}

std::vector<FiniteUniverse::Endo> FiniteUniverse::enumerate_endos(std::size_t cap,
                                                                  std::uint64_t seed) const {
    const int n = g_->order();
    std::vector<Endo> result;
    if (n == 1) {
        result.push_back(identity_endo(*g_));
        return result;
    }
    GeneratorWords words(*g_, generating_set());
    const std::size_t k = words.gens().size();
    double space = 1;
    for (std::size_t i = 0; i < k; ++i) space *= n;

    std::vector<Elt> images(k), map;
    auto try_candidate = [&](const std::vector<Elt>& imgs) {
        if (words.extend(imgs, map)) result.emplace_back(*g_, map);
    };

    if (space <= static_cast<double>(cap)) {
        std::vector<std::size_t> idx(k, 0);
        while (true) {
            for (std::size_t i = 0; i < k; ++i) images[i] = static_cast<Elt>(idx[i]);
            try_candidate(images);
            std::size_t pos = 0;
            while (pos < k && ++idx[pos] == static_cast<std::size_t>(n)) idx[pos++] = 0;
            if (pos == k) break;
        }
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> dist(0, n - 1);
        std::set<std::vector<Elt>> seen;
        for (std::size_t trial = 0; trial < cap; ++trial) {
            for (std::size_t i = 0; i < k; ++i) images[i] = static_cast<Elt>(dist(rng));
            if (seen.insert(images).second) try_candidate(images);
        }
    }
    return result;
}

Restriction FiniteUniverse::restrict_to(const Subgroup& s) const {
    if (!is_subgroup(*g_, s)) throw InputError("restrict_to: not a subgroup");
    const int k = static_cast<int>(s.size());
    std::vector<Elt> to_sub(g_->order(), kNotInSub);
    for (int i = 0; i < k; ++i) to_sub[s[i]] = static_cast<Elt>(i);
    std::vector<std::vector<Elt>> tab(k, std::vector<Elt>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) tab[i][j] = to_sub[g_->mul(s[i], s[j])];
    std::vector<std::string> labels(k);
    for (int i = 0; i < k; ++i) labels[i] = g_->label(s[i]);
    FiniteGroup sub(std::move(tab), g_->name() + "|sub", std::move(labels));
    return {FiniteUniverse(std::move(sub)), std::move(to_sub), s};
}

bool FiniteUniverse::is_normal(const Subgroup& s) const {
    for (Elt x = 0; x < g_->order(); ++x)
        for (Elt h : s)
            if (!finite::member(s, g_->mul(g_->mul(x, h), g_->inv(x)))) return false;
    return true;
}

FiniteUniverse::Quotient FiniteUniverse::quotient(const Subgroup& n) const {
    if (!is_subgroup(*g_, n)) throw InputError("quotient: not a subgroup");
    if (!is_normal(n)) throw InputError("quotient: subgroup is not normal");
    const int order = g_->order();
    std::vector<int> coset_of(order, -1);
    std::vector<Elt> reps;
    for (Elt x = 0; x < order; ++x) {
        if (coset_of[x] != -1) continue;
        int id = static_cast<int>(reps.size());
        reps.push_back(x);
        for (Elt h : n) coset_of[g_->mul(x, h)] = id;
    }
    const int q = static_cast<int>(reps.size());
    std::vector<std::vector<Elt>> tab(q, std::vector<Elt>(q));
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            tab[a][b] = static_cast<Elt>(coset_of[g_->mul(reps[a], reps[b])]);
    std::vector<std::string> labels(q);
    for (int a = 0; a < q; ++a) labels[a] = g_->label(reps[a]) + "N";
    FiniteGroup qg(std::move(tab), g_->name() + "/N", std::move(labels));
    std::vector<Elt> proj(order);
    for (int x = 0; x < order; ++x) proj[x] = static_cast<Elt>(coset_of[x]);
    return {std::move(qg), std::move(proj)};
}

}  // namespace tdlc::finite
