#include "tdlc/finite/catalog.hpp"

#include "tdlc/certificate.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace tdlc::finite {

namespace {

std::string tuple_label(const std::vector<int>& t) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
    os << ')';
    return os.str();
}

}  // namespace

std::vector<int> index_to_tuple(const std::vector<int>& factors, Elt x) {
    std::vector<int> t(factors.size());
    int v = x;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        t[i] = v % factors[i];
        v /= factors[i];
    }
    return t;
}

Elt tuple_to_index(const std::vector<int>& factors, const std::vector<int>& tuple) {
    int idx = 0;
    for (std::size_t i = factors.size(); i-- > 0;) {
        int a = ((tuple[i] % factors[i]) + factors[i]) % factors[i];
        idx = idx * factors[i] + a;
    }
    return static_cast<Elt>(idx);
}

FiniteGroup cyclic_product(const std::vector<int>& factors) {
    long long n = 1;
    for (int f : factors) {
        if (f < 1) throw InputError("cyclic factor must be positive");
        n *= f;
    }
    if (n < 1 || n > FiniteGroup::kMaxVerifiedOrder) throw InputError("cyclic product too large");
    const int order = static_cast<int>(n);
    std::vector<std::vector<Elt>> tab(order, std::vector<Elt>(order));
    std::vector<std::string> labels(order);
    for (int a = 0; a < order; ++a) {
        auto ta = index_to_tuple(factors, static_cast<Elt>(a));
        labels[a] = tuple_label(ta);
        for (int b = 0; b < order; ++b) {
            auto tb = index_to_tuple(factors, static_cast<Elt>(b));
            std::vector<int> tc(factors.size());
            for (std::size_t i = 0; i < factors.size(); ++i) tc[i] = (ta[i] + tb[i]) % factors[i];
            tab[a][b] = tuple_to_index(factors, tc);
        }
    }
    std::ostringstream name;
    for (std::size_t i = 0; i < factors.size(); ++i) name << (i ? "x" : "") << 'C' << factors[i];
    return FiniteGroup(std::move(tab), name.str(), std::move(labels));
}

FiniteEndo endo_from_tuple_rule(const FiniteGroup& g, const std::vector<int>& factors,
                                const std::function<std::vector<int>(const std::vector<int>&)>& rule) {
    std::vector<Elt> m(g.order());
    for (int x = 0; x < g.order(); ++x)
        m[static_cast<std::size_t>(x)] = tuple_to_index(factors, rule(index_to_tuple(factors, static_cast<Elt>(x))));
    return FiniteEndo(g, std::move(m));
}

FiniteGroup dihedral(int n) {
    if (n < 1 || 2 * n > FiniteGroup::kMaxVerifiedOrder) throw InputError("bad dihedral order");
    const int order = 2 * n;
    /* element r^i s^j encoded as i + n*j;  s r = r^{-1} s */
    auto enc = [n](int i, int j) { return static_cast<Elt>(((i % n + n) % n) + n * j); };
    std::vector<std::vector<Elt>> tab(order, std::vector<Elt>(order));
    std::vector<std::string> labels(order);
    for (int i1 = 0; i1 < n; ++i1)
        for (int j1 = 0; j1 < 2; ++j1) {
            std::ostringstream lab;
            lab << 'r' << i1 << (j1 ? "s" : "");
            labels[enc(i1, j1)] = lab.str();
            for (int i2 = 0; i2 < n; ++i2)
                for (int j2 = 0; j2 < 2; ++j2) {
                    int i = j1 == 0 ? i1 + i2 : i1 - i2;
                    tab[enc(i1, j1)][enc(i2, j2)] = enc(i, (j1 + j2) % 2);
                }
        }
    return FiniteGroup(std::move(tab), "D" + std::to_string(n), std::move(labels));
}

FiniteGroup quaternion8() {
    /* elements (sign s, axis a) with axes 1,i,j,k encoded as s + 2*a */
    static const std::array<std::array<int, 4>, 4> axis = {{{0, 1, 2, 3},  // 1*x
                                                            {1, 0, 3, 2},  // i*x
                                                            {2, 3, 0, 1},  // j*x
                                                            {3, 2, 1, 0}}};
    static const std::array<std::array<int, 4>, 4> sign = {{{0, 0, 0, 0},
                                                            {0, 1, 0, 1},   // ii=-1, ik=-j
                                                            {0, 1, 1, 0},   // jj=-1, ji=-k
                                                            {0, 0, 1, 1}}}; // kj=-i, kk=-1
    auto enc = [](int s, int a) { return static_cast<Elt>(s + 2 * a); };
    std::vector<std::vector<Elt>> tab(8, std::vector<Elt>(8));
    static const char* axname[4] = {"1", "i", "j", "k"};
    std::vector<std::string> labels(8);
    for (int s1 = 0; s1 < 2; ++s1)
        for (int a1 = 0; a1 < 4; ++a1) {
            labels[enc(s1, a1)] = std::string(s1 ? "-" : "") + axname[a1];
            for (int s2 = 0; s2 < 2; ++s2)
                for (int a2 = 0; a2 < 4; ++a2)
                    tab[enc(s1, a1)][enc(s2, a2)] =
                        enc((s1 + s2 + sign[a1][a2]) % 2, axis[a1][a2]);
        }
    return FiniteGroup(std::move(tab), "Q8", std::move(labels));
}

FiniteGroup alternating4() {
    std::vector<std::array<int, 4>> perms;
    std::array<int, 4> p = {0, 1, 2, 3};
    do {
        int invs = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (p[i] > p[j]) ++invs;
        if (invs % 2 == 0) perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));

    auto find = [&](const std::array<int, 4>& q) {
        for (std::size_t i = 0; i < perms.size(); ++i)
            if (perms[i] == q) return static_cast<Elt>(i);
        throw std::logic_error("A4 closure failure");
    };
    std::vector<std::vector<Elt>> tab(12, std::vector<Elt>(12));
    std::vector<std::string> labels(12);
    for (std::size_t a = 0; a < 12; ++a) {
        std::ostringstream lab;
        lab << '[' << perms[a][0] << perms[a][1] << perms[a][2] << perms[a][3] << ']';
        labels[a] = lab.str();
        for (std::size_t b = 0; b < 12; ++b) {
            std::array<int, 4> c{};
            for (int x = 0; x < 4; ++x) c[x] = perms[a][perms[b][x]];
            tab[a][b] = find(c);
        }
    }
    return FiniteGroup(std::move(tab), "A4", std::move(labels));
}

FiniteGroup dicyclic3() {
    /* a^6 = 1, b^2 = a^3, b a b^-1 = a^-1; element a^i b^j as i + 6*j */
    auto enc = [](int i, int j) { return static_cast<Elt>(((i % 6 + 6) % 6) + 6 * j); };
    std::vector<std::vector<Elt>> tab(12, std::vector<Elt>(12));
    std::vector<std::string> labels(12);
    for (int i1 = 0; i1 < 6; ++i1)
        for (int j1 = 0; j1 < 2; ++j1) {
            std::ostringstream lab;
            lab << 'a' << i1 << (j1 ? "b" : "");
            labels[enc(i1, j1)] = lab.str();
            for (int i2 = 0; i2 < 6; ++i2)
                for (int j2 = 0; j2 < 2; ++j2) {
                    Elt r;
                    if (j1 == 0)
                        r = enc(i1 + i2, j2);
                    else if (j2 == 0)
                        r = enc(i1 - i2, 1);
                    else
                        r = enc(i1 - i2 + 3, 0);
                    tab[enc(i1, j1)][enc(i2, j2)] = r;
                }
        }
    return FiniteGroup(std::move(tab), "Dic3", std::move(labels));
}

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> v;
        for (int n = 1; n <= 12; ++n) v.push_back({"C" + std::to_string(n), cyclic_product({n})});
        v.push_back({"C2xC2", cyclic_product({2, 2})});
        v.push_back({"C2xC4", cyclic_product({2, 4})});
        v.push_back({"C2xC2xC2", cyclic_product({2, 2, 2})});
        v.push_back({"C3xC3", cyclic_product({3, 3})});
        v.push_back({"C2xC6", cyclic_product({2, 6})});
        v.push_back({"S3", dihedral(3)});
        v.push_back({"D4", dihedral(4)});
        v.push_back({"D6", dihedral(6)});
        v.push_back({"Q8", quaternion8()});
        v.push_back({"A4", alternating4()});
        v.push_back({"Dic3", dicyclic3()});
        for (int n = 13; n <= 16; ++n)
            v.push_back({"C" + std::to_string(n), cyclic_product({n})});
        v.push_back({"C4xC4", cyclic_product({4, 4})});
        v.push_back({"C2xC8", cyclic_product({2, 8})});
        v.push_back({"C2xC2xC4", cyclic_product({2, 2, 4})});
        v.push_back({"D8", dihedral(8)});
        v.push_back({"C3xC3xC3", cyclic_product({3, 3, 3})});
        return v;
    }();
    return entries;
}

const FiniteGroup& catalog_group(const std::string& name) {
    for (const auto& e : catalog())
        if (e.name == name) return e.group;
    throw InputError("unknown catalog group: " + name);
}

std::vector<const CatalogEntry*> catalog_up_to(int max_order) {
    std::vector<const CatalogEntry*> r;
    for (const auto& e : catalog())
        if (e.group.order() <= max_order) r.push_back(&e);
    return r;
}

}  // namespace tdlc::finite
