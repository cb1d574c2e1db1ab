#include "tdlc/finite/finite_group.hpp"

#include "tdlc/certificate.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace tdlc::finite {

FiniteGroup::FiniteGroup(std::vector<std::vector<Elt>> table, std::string name,
                         std::vector<std::string> labels)
    : tab_(std::move(table)), labels_(std::move(labels)), name_(std::move(name)) {
    const std::size_t n = tab_.size();
    if (n == 0 || n > kMaxVerifiedOrder) throw InputError("group order must be in [1, 512]");
    for (const auto& row : tab_) {
        if (row.size() != n) throw InputError("Cayley table is not square");
        for (Elt v : row)
            if (v >= n) throw InputError("Cayley table entry out of range");
    }

    /* identity: the unique e with e*x == x*e == x for all x */
    bool found = false;
    for (Elt e = 0; e < n; ++e) {
        bool ok = true;
        for (Elt x = 0; x < n && ok; ++x) ok = tab_[e][x] == x && tab_[x][e] == x;
        if (ok) {
            id_ = e;
            found = true;
            break;
        }
    }
    if (!found) throw InputError("Cayley table has no identity");

    for (Elt a = 0; a < n; ++a)
        for (Elt b = 0; b < n; ++b)
            for (Elt c = 0; c < n; ++c)
                if (tab_[tab_[a][b]][c] != tab_[a][tab_[b][c]])
                    throw InputError("Cayley table is not associative");

    inv_.assign(n, 0);
    for (Elt a = 0; a < n; ++a) {
        bool has = false;
        for (Elt b = 0; b < n; ++b)
            if (tab_[a][b] == id_ && tab_[b][a] == id_) {
                inv_[a] = b;
                has = true;
                break;
            }
        if (!has) throw InputError("Cayley table element without inverse");
    }

    abelian_ = true;
    for (Elt a = 0; a < n && abelian_; ++a)
        for (Elt b = 0; b < a; ++b)
            if (tab_[a][b] != tab_[b][a]) {
                abelian_ = false;
                break;
            }

    if (labels_.empty()) {
        labels_.resize(n);
        for (std::size_t i = 0; i < n; ++i) labels_[i] = std::to_string(i);
    }
    if (labels_.size() != n) throw InputError("label list size mismatch");
}

bool member(const Subgroup& s, Elt x) { return std::binary_search(s.begin(), s.end(), x); }

bool subset(const Subgroup& a, const Subgroup& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
    Subgroup r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

Subgroup closure(const FiniteGroup& g, std::vector<Elt> gens) {
    std::vector<char> in(g.order(), 0);
    std::vector<Elt> frontier;
    auto add = [&](Elt x) {
        if (!in[x]) {
            in[x] = 1;
            frontier.push_back(x);
        }
    };
    add(g.identity());
    for (Elt x : gens) add(x);
    std::vector<Elt> all(frontier);
    while (!frontier.empty()) {
        Elt x = frontier.back();
        frontier.pop_back();
        for (std::size_t i = 0; i < all.size(); ++i) {
            /* closure under products suffices: the set is finite, so it is
               automatically closed under inverses once product-closed */
            Elt a = all[i];
            Elt xa = g.mul(x, a), ax = g.mul(a, x);
            if (!in[xa]) {
                in[xa] = 1;
                frontier.push_back(xa);
                all.push_back(xa);
            }
            if (!in[ax]) {
                in[ax] = 1;
                frontier.push_back(ax);
                all.push_back(ax);
            }
        }
    }
    Subgroup r;
    for (Elt x = 0; x < g.order(); ++x)
        if (in[x]) r.push_back(x);
    return r;
}

bool is_subgroup(const FiniteGroup& g, const Subgroup& s) {
    if (s.empty() || !member(s, g.identity())) return false;
    for (Elt a : s)
        for (Elt b : s)
            if (!member(s, g.mul(a, b))) return false;
    return true;
}

Subgroup whole(const FiniteGroup& g) {
    Subgroup r(g.order());
    for (int i = 0; i < g.order(); ++i) r[static_cast<std::size_t>(i)] = static_cast<Elt>(i);
    return r;
}

Subgroup trivial(const FiniteGroup& g) { return {g.identity()}; }

Subgroup product_set(const FiniteGroup& g, const Subgroup& a, const Subgroup& b) {
    std::vector<char> in(g.order(), 0);
    for (Elt x : a)
        for (Elt y : b) in[g.mul(x, y)] = 1;
    Subgroup r;
    for (Elt x = 0; x < g.order(); ++x)
        if (in[x]) r.push_back(x);
    return r;
}

FiniteEndo::FiniteEndo(const FiniteGroup& g, std::vector<Elt> map) : map_(std::move(map)) {
    const int n = g.order();
    if (static_cast<int>(map_.size()) != n) throw InputError("endo map size mismatch");
    for (Elt v : map_)
        if (v >= n) throw InputError("endo map entry out of range");
    for (Elt a = 0; a < n; ++a)
        for (Elt b = 0; b < n; ++b)
            if (map_[g.mul(a, b)] != g.mul(map_[a], map_[b]))
                throw InputError("map is not an endomorphism");
}

FiniteEndo compose(const FiniteGroup& g, const FiniteEndo& f1, const FiniteEndo& f2) {
    std::vector<Elt> m(g.order());
    for (int x = 0; x < g.order(); ++x)
        m[static_cast<std::size_t>(x)] = f1.apply(f2.apply(static_cast<Elt>(x)));
    return FiniteEndo(g, std::move(m));
}

FiniteEndo endo_pow(const FiniteGroup& g, const FiniteEndo& f, int n) {
    if (n < 1) throw InputError("endo_pow: exponent must be >= 1");
    FiniteEndo r = f;
    for (int i = 1; i < n; ++i) r = compose(g, r, f);
    return r;
}

FiniteEndo identity_endo(const FiniteGroup& g) {
    std::vector<Elt> m(g.order());
    for (int x = 0; x < g.order(); ++x) m[static_cast<std::size_t>(x)] = static_cast<Elt>(x);
    return FiniteEndo(g, std::move(m));
}

GeneratorWords::GeneratorWords(const FiniteGroup& g, std::vector<Elt> gens)
    : g_(&g), gens_(std::move(gens)) {
    const int n = g.order();
    for (Elt x : gens_)
        if (x >= n) throw InputError("generator index out of range");
    parent_.assign(n, -2);
    via_gen_.assign(n, -1);
    std::vector<Elt> queue{g.identity()};
    parent_[g.identity()] = -1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        Elt x = queue[qi];
        for (std::size_t gi = 0; gi < gens_.size(); ++gi) {
            Elt y = g.mul(x, gens_[gi]);
            if (parent_[y] == -2) {
                parent_[y] = x;
                via_gen_[y] = static_cast<int>(gi);
                queue.push_back(y);
            }
        }
    }
    if (static_cast<int>(queue.size()) != n) throw InputError("elements do not generate the group");
}

bool GeneratorWords::extend(const std::vector<Elt>& images, std::vector<Elt>& out_map) const {
    const FiniteGroup& g = *g_;
    const int n = g.order();
    if (images.size() != gens_.size()) throw InputError("one image per generator required");
    for (Elt v : images)
        if (v >= n) throw InputError("generator image out of range");
    out_map.assign(n, 0);
    std::vector<char> done(n, 0);
    out_map[g.identity()] = g.identity();
    done[g.identity()] = 1;
    std::function<Elt(Elt)> val = [&](Elt x) -> Elt {
        if (done[x]) return out_map[x];
        Elt p = static_cast<Elt>(parent_[x]);
        Elt v = g.mul(val(p), images[static_cast<std::size_t>(via_gen_[x])]);
        out_map[x] = v;
        done[x] = 1;
        return v;
    };
    for (Elt x = 0; x < n; ++x) val(x);
    for (Elt a = 0; a < n; ++a)
        for (Elt b = 0; b < n; ++b)
            if (out_map[g.mul(a, b)] != g.mul(out_map[a], out_map[b])) return false;
    return true;
}

FiniteEndo endo_from_map(const FiniteGroup& g, const std::vector<Elt>& gens,
                                const std::vector<Elt>& images) {
    GeneratorWords words(g, gens);
    std::vector<Elt> map;
    if (!words.extend(images, map)) throw InputError("generator images violate a relation");
    return FiniteEndo(g, std::move(map));
}

Subgroup endo_image(const FiniteGroup& g, const FiniteEndo& f, const Subgroup& s) {
    std::vector<char> in(g.order(), 0);
    for (Elt x : s) in[f.apply(x)] = 1;
    Subgroup r;
    for (Elt x = 0; x < g.order(); ++x)
        if (in[x]) r.push_back(x);
    return r;
}

Subgroup endo_preimage(const FiniteEndo& f, const Subgroup& target, const Subgroup& ambient) {
    Subgroup r;
    for (Elt x : ambient)
        if (member(target, f.apply(x))) r.push_back(x);
    return r;
}

}  // namespace tdlc::finite
