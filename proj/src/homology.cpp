#include "gf/homology.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <set>
#include <sstream>

#include "gf/errors.hpp"
#include "gf/genfun.hpp"

namespace gf {

BettiVector::BettiVector(std::vector<long> entries) : entries_(std::move(entries)) {
    while (!entries_.empty() && entries_.back() == 0) entries_.pop_back();
    for (long e : entries_)
        if (e < 0) throw Error("Betti numbers must be nonnegative");
}

BettiVector BettiVector::sphere(int d) {
    if (d < 0) return {};
    std::vector<long> v(d + 1, 0);
    v[d] = 1;
    return BettiVector(v);
}

BettiVector BettiVector::shifted(int by) const {
    if (entries_.empty()) return {};
    std::vector<long> v(entries_.size() + by, 0);
    for (std::size_t i = 0; i < entries_.size(); ++i) v[i + by] = entries_[i];
    return BettiVector(v);
}

int BettiVector::differing_entries(const BettiVector& o) const {
    const int m = static_cast<int>(std::max(entries_.size(), o.entries_.size()));
    int diff = 0;
    for (int i = 0; i < m; ++i)
        if (at(i) != o.at(i)) ++diff;
    return diff;
}

std::string BettiVector::str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < entries_.size(); ++i) os << (i ? "," : "") << entries_[i];
    os << "]";
    return os.str();
}

const BettiVector& SublevelType::to_betti() const {
    if (kind == Kind::Empty) throw Error("empty sublevel set has no Betti vector");
    return betti;
}

std::string SublevelType::str() const {
    switch (kind) {
        case Kind::Empty:
            return "empty";
        case Kind::Sphere:
            return "S^" + std::to_string(sphere_dim);
        case Kind::Explicit:
            return betti.str();
    }
    return "";
}

SublevelType quad_sublevel_type(const QuadForm& Q, double tol_eig) {
    Inertia in = index_nullity(Q, tol_eig);
    if (in.index + in.nullity == 0) return SublevelType::empty();
    return SublevelType::sphere(in.index + in.nullity - 1);
}

BettiVector join_betti(int d, const SublevelType& X) {
    if (X.is_empty()) return BettiVector::sphere(d);
    return X.to_betti().shifted(d + 1);
}

BettiVector composed_sublevel_betti(int n, int t, const SublevelType& F_sub) {
    if (t != 0 && t != 1) throw Error("fiber reduction needs a_t = identity, t in {0,1}");
    const int ind = index_nullity(reeb_family(n, t).quad()).index;
    if (F_sub.is_empty()) return BettiVector::sphere(ind);
    return F_sub.to_betti().shifted(ind);
}

namespace {

using Simplex = std::vector<int>;  // sorted vertex ids

struct Complex {
    std::vector<Vec> verts;       // on the unit sphere
    std::vector<Simplex> facets;  // maximal cells, uniform dimension
};

Complex cross_polytope_boundary(int k) {
    Complex c;
    c.verts.reserve(2 * k);
    for (int i = 0; i < k; ++i) {
        c.verts.push_back(Vec::Unit(k, i));
        c.verts.push_back(-Vec::Unit(k, i));
    }
    // facets: one vertex per axis, all sign choices
    const int count = 1 << k;
    for (int mask = 0; mask < count; ++mask) {
        Simplex s;
        for (int i = 0; i < k; ++i) s.push_back(2 * i + ((mask >> i) & 1));
        std::sort(s.begin(), s.end());
        c.facets.push_back(s);
    }
    return c;
}

struct MidpointCache {
    Complex* c;
    std::map<std::pair<int, int>, int> mid;

    int operator()(int a, int b) {
        auto key = std::minmax(a, b);
        auto it = mid.find(key);
        if (it != mid.end()) return it->second;
        Vec m = (c->verts[a] + c->verts[b]).normalized();
        c->verts.push_back(m);
        int id = static_cast<int>(c->verts.size()) - 1;
        mid.emplace(key, id);
        return id;
    }
};

void push_sorted(std::vector<Simplex>& out, std::initializer_list<int> v) {
    Simplex s(v);
    std::sort(s.begin(), s.end());
    out.push_back(std::move(s));
}

Complex subdivide_edge(const Complex& in) {
    Complex out;
    out.verts = in.verts;
    MidpointCache mid{&out, {}};
    for (const Simplex& s : in.facets) {
        switch (s.size()) {
            case 2: {
                int m = mid(s[0], s[1]);
                push_sorted(out.facets, {s[0], m});
                push_sorted(out.facets, {m, s[1]});
                break;
            }
            case 3: {
                int a = s[0], b = s[1], c = s[2];
                int ab = mid(a, b), ac = mid(a, c), bc = mid(b, c);
                push_sorted(out.facets, {a, ab, ac});
                push_sorted(out.facets, {b, ab, bc});
                push_sorted(out.facets, {c, ac, bc});
                push_sorted(out.facets, {ab, ac, bc});
                break;
            }
            case 4: {
                int a = s[0], b = s[1], c = s[2], d = s[3];
                int ab = mid(a, b), ac = mid(a, c), ad = mid(a, d);
                int bc = mid(b, c), bd = mid(b, d), cd = mid(c, d);
                push_sorted(out.facets, {a, ab, ac, ad});
                push_sorted(out.facets, {b, ab, bc, bd});
                push_sorted(out.facets, {c, ac, bc, cd});
                push_sorted(out.facets, {d, ad, bd, cd});
                // central octahedron split along the ab--cd diagonal;
                // equator cycle ac - ad - bd - bc
                push_sorted(out.facets, {ab, cd, ac, ad});
                push_sorted(out.facets, {ab, cd, ad, bd});
                push_sorted(out.facets, {ab, cd, bd, bc});
                push_sorted(out.facets, {ab, cd, bc, ac});
                break;
            }
            default:
                throw Error("edge subdivision supports cell dimension <= 3");
        }
    }
    return out;
}

Complex subdivide_barycentric(const Complex& in) {
    Complex out;
    out.verts = in.verts;
    std::map<Simplex, int> face_id;
    auto id_of = [&](const Simplex& f) {
        if (f.size() == 1) return f[0];
        auto it = face_id.find(f);
        if (it != face_id.end()) return it->second;
        Vec b = Vec::Zero(out.verts[0].size());
        for (int v : f) b += out.verts[v];
        out.verts.push_back(b.normalized());
        int id = static_cast<int>(out.verts.size()) - 1;
        face_id.emplace(f, id);
        return id;
    };
    for (const Simplex& s : in.facets) {
        // flags: every permutation yields a chain of faces
        Simplex perm = s;
        std::sort(perm.begin(), perm.end());
        do {
            Simplex chain_face;
            Simplex cell;
            for (int v : perm) {
                chain_face.push_back(v);
                Simplex sorted_face = chain_face;
                std::sort(sorted_face.begin(), sorted_face.end());
                cell.push_back(id_of(sorted_face));
            }
            std::sort(cell.begin(), cell.end());
            out.facets.push_back(cell);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return out;
}

Complex subdivide(const Complex& in) {
    if (in.facets.empty()) return in;
    return in.facets[0].size() <= 4 ? subdivide_edge(in) : subdivide_barycentric(in);
}

// rank over GF(p) for p < 2^31, dense elimination; int64 products do not overflow
long rank_mod_p(std::vector<std::vector<std::int64_t>>& m, std::int64_t p) {
    const long rows = static_cast<long>(m.size());
    if (rows == 0) return 0;
    const long cols = static_cast<long>(m[0].size());
    auto pow_mod = [&](std::int64_t b, std::int64_t e) {
        std::int64_t r = 1;
        b %= p;
        if (b < 0) b += p;
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return r;
    };
    long rank = 0;
    for (long col = 0; col < cols && rank < rows; ++col) {
        long pivot = -1;
        for (long r = rank; r < rows; ++r)
            if (m[r][col] % p != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(m[rank], m[pivot]);
        const std::int64_t inv = pow_mod(m[rank][col], p - 2);
        for (long r = rank + 1; r < rows; ++r) {
            if (m[r][col] % p == 0) continue;
            std::int64_t f = m[r][col] % p * inv % p;
            if (f < 0) f += p;
            auto& mr = m[r];
            const auto& mp = m[rank];
            for (long c = col; c < cols; ++c) {
                mr[c] = (mr[c] - f * (mp[c] % p)) % p;
                if (mr[c] < 0) mr[c] += p;
            }
        }
        ++rank;
    }
    return rank;
}

long rank_exact_rational(const std::vector<std::vector<std::int64_t>>& m0) {
    using Rat = boost::multiprecision::cpp_rational;
    const long rows = static_cast<long>(m0.size());
    if (rows == 0) return 0;
    const long cols = static_cast<long>(m0[0].size());
    std::vector<std::vector<Rat>> m(rows, std::vector<Rat>(cols));
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c) m[r][c] = m0[r][c];
    long rank = 0;
    for (long col = 0; col < cols && rank < rows; ++col) {
        long pivot = -1;
        for (long r = rank; r < rows; ++r)
            if (m[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(m[rank], m[pivot]);
        for (long r = rank + 1; r < rows; ++r) {
            if (m[r][col] == 0) continue;
            Rat f = m[r][col] / m[rank][col];
            for (long c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
        }
        ++rank;
    }
    return rank;
}

long boundary_rank(const std::vector<Simplex>& faces_lo, const std::vector<Simplex>& faces_hi) {
    if (faces_lo.empty() || faces_hi.empty()) return 0;
    std::map<Simplex, long> lo_index;
    for (std::size_t i = 0; i < faces_lo.size(); ++i) lo_index[faces_lo[i]] = static_cast<long>(i);
    std::vector<std::vector<std::int64_t>> m(faces_lo.size(),
                                             std::vector<std::int64_t>(faces_hi.size(), 0));
    for (std::size_t j = 0; j < faces_hi.size(); ++j) {
        const Simplex& s = faces_hi[j];
        int sign = 1;
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
            Simplex f;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (i != drop) f.push_back(s[i]);
            m[lo_index.at(f)][j] = sign;
            sign = -sign;
        }
    }
    if (std::max(faces_lo.size(), faces_hi.size()) <= 150) return rank_exact_rational(m);
    return rank_mod_p(m, 2147483647LL);
}

struct ComplexBetti {
    BettiVector betti;
    bool empty;
    int vertices;
    int cells;
};

ComplexBetti sublevel_betti(const Complex& c, const std::function<double(const Vec&)>& f,
                            double level) {
    std::vector<bool> keep(c.verts.size());
    for (std::size_t i = 0; i < c.verts.size(); ++i) keep[i] = f(c.verts[i]) <= level;

    const int top_dim = static_cast<int>(c.facets[0].size()) - 1;
    std::vector<std::set<Simplex>> faces(top_dim + 1);
    for (const Simplex& s : c.facets) {
        bool ok = true;
        for (int v : s)
            if (!keep[v]) ok = false;
        if (ok) {
            faces[top_dim].insert(s);
            continue;
        }
        // keep the maximal passing sub-faces; enumerate subsets
        const int sz = static_cast<int>(s.size());
        for (int mask = 1; mask < (1 << sz); ++mask) {
            Simplex sub;
            bool pass = true;
            for (int i = 0; i < sz; ++i)
                if (mask & (1 << i)) {
                    if (!keep[s[i]]) {
                        pass = false;
                        break;
                    }
                    sub.push_back(s[i]);
                }
            if (pass) faces[static_cast<int>(sub.size()) - 1].insert(sub);
        }
    }
    // close under faces from the top cells that fully pass
    for (int d = top_dim; d >= 1; --d) {
        for (const Simplex& s : faces[d]) {
            for (std::size_t drop = 0; drop < s.size(); ++drop) {
                Simplex f2;
                for (std::size_t i = 0; i < s.size(); ++i)
                    if (i != drop) f2.push_back(s[i]);
                faces[d - 1].insert(f2);
            }
        }
    }

    ComplexBetti out;
    out.vertices = static_cast<int>(faces[0].size());
    out.cells = static_cast<int>(faces[top_dim].size());
    if (faces[0].empty()) {
        out.betti = BettiVector();
        out.empty = true;
        return out;
    }
    out.empty = false;

    std::vector<std::vector<Simplex>> fl(top_dim + 1);
    for (int d = 0; d <= top_dim; ++d) fl[d].assign(faces[d].begin(), faces[d].end());

    std::vector<long> rank_d(top_dim + 2, 0);  // rank of boundary C_d -> C_{d-1}
    for (int d = 1; d <= top_dim; ++d) rank_d[d] = boundary_rank(fl[d - 1], fl[d]);

    std::vector<long> betti(top_dim + 1, 0);
    for (int d = 0; d <= top_dim; ++d) {
        const long cd = static_cast<long>(fl[d].size());
        const long kernel = d == 0 ? cd : cd - rank_d[d];
        betti[d] = kernel - rank_d[d + 1];
    }
    betti[0] -= 1;  // reduced
    out.betti = BettiVector(betti);
    return out;
}

Complex build_complex(int k, int subdivisions) {
    if (k < 2 || k > 5) throw Error("brute-force oracle supports ambient dimension 2..5");
    Complex c = cross_polytope_boundary(k);
    for (int i = 0; i < subdivisions; ++i) c = subdivide(c);
    return c;
}

} // namespace

BruteForceResult brute_force_betti(int k, const std::function<double(const Vec&)>& f, double level,
                                   int subdivisions) {
    Complex c1 = build_complex(k, subdivisions);
    ComplexBetti b1 = sublevel_betti(c1, f, level);
    Complex c2 = subdivide(c1);
    ComplexBetti b2 = sublevel_betti(c2, f, level);
    if (!(b1.betti == b2.betti) || b1.empty != b2.empty)
        throw ResolutionTooCoarse("Betti vector unstable between subdivision levels " +
                                  std::to_string(subdivisions) + " and " +
                                  std::to_string(subdivisions + 1) + ": " + b1.betti.str() +
                                  " vs " + b2.betti.str());
    return {b2.betti, b2.empty, b2.vertices, b2.cells};
}

JoinCheckResult direct_sum_join_check(const QuadForm& Q1, const QuadForm& Q2, double level,
                                      int subdivisions) {
    if (Q1.dim() > 3 || Q2.dim() > 3) throw Error("join check factors must have dim <= 3");
    const int k = Q1.dim() + Q2.dim();
    auto f = [&](const Vec& x) {
        return Q1.value(x.head(Q1.dim())) + Q2.value(x.tail(Q2.dim()));
    };
    BruteForceResult oracle = brute_force_betti(k, f, level, subdivisions);

    SublevelType t1 = quad_sublevel_type(Q1);
    SublevelType t2 = quad_sublevel_type(Q2);
    JoinCheckResult res;
    res.oracle = oracle.betti;
    bool expect_empty = false;
    if (t1.is_empty() && t2.is_empty()) {
        expect_empty = true;  // {} * {} = {}
        res.expected = BettiVector();
    } else if (t1.is_empty()) {
        res.expected = t2.to_betti();
    } else if (t2.is_empty()) {
        res.expected = t1.to_betti();
    } else {
        res.expected = join_betti(t1.sphere_dim, t2);
    }
    res.match = res.expected == oracle.betti && expect_empty == oracle.empty;
    return res;
}

std::string sublevel_mesh_off(int k, const std::function<double(const Vec&)>& f, double level,
                              int subdivisions) {
    if (k != 3) throw Error("OFF export implemented for surface meshes (k = 3)");
    Complex c = build_complex(k, subdivisions);
    std::vector<int> remap(c.verts.size(), -1);
    std::vector<int> used;
    std::vector<Simplex> tris;
    for (const Simplex& s : c.facets) {
        bool ok = true;
        for (int v : s)
            if (f(c.verts[v]) > level) ok = false;
        if (!ok) continue;
        for (int v : s)
            if (remap[v] < 0) {
                remap[v] = static_cast<int>(used.size());
                used.push_back(v);
            }
        tris.push_back(s);
    }
    std::ostringstream os;
    os << "OFF\n" << used.size() << " " << tris.size() << " 0\n";
    os.precision(12);
    for (int v : used) os << c.verts[v][0] << " " << c.verts[v][1] << " " << c.verts[v][2] << "\n";
    for (const Simplex& s : tris)
        os << "3 " << remap[s[0]] << " " << remap[s[1]] << " " << remap[s[2]] << "\n";
    return os.str();
}

} // namespace gf
