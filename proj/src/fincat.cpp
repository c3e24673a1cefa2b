#include "lenscat/fincat.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace lenscat {

namespace {

constexpr std::size_t kNoIdentity = static_cast<std::size_t>(-1);

// Generous environmental guards for constructed pullback categories.
constexpr std::size_t kPullbackMaxObjects = 50000;
constexpr std::size_t kPullbackMaxArrows = 400000;
constexpr std::size_t kPullbackMaxComposites = 12000000;

std::uint64_t pack(std::uint32_t g, std::uint32_t f) {
    return (static_cast<std::uint64_t>(g) << 32) | f;
}

std::string pair_name(const std::string& a, const std::string& b) {
    std::string out;
    out.reserve(a.size() + b.size() + 3);
    out += '(';
    out += a;
    out += ',';
    out += b;
    out += ')';
    return out;
}

} // namespace

bool FinCategory::has_object(const std::string& id) const {
    return object_index_.count(id) != 0;
}

bool FinCategory::has_arrow(const std::string& id) const {
    return arrow_index_.count(id) != 0;
}

const Arrow& FinCategory::arrow(const std::string& id) const {
    auto it = arrow_index_.find(id);
    if (it == arrow_index_.end())
        throw ReferenceError("no arrow '" + id + "' in category '" + name_ + "'");
    return arrows_[it->second];
}

const std::string& FinCategory::identity_of(const std::string& obj) const {
    auto it = object_index_.find(obj);
    if (it == object_index_.end())
        throw ReferenceError("no object '" + obj + "' in category '" + name_ + "'");
    std::size_t ai = identity_[it->second];
    if (ai == kNoIdentity)
        throw ReferenceError("object '" + obj + "' in category '" + name_ +
                             "' has no identity arrow");
    return arrows_[ai].id;
}

std::optional<std::string> FinCategory::identity_if(const std::string& obj) const {
    auto it = object_index_.find(obj);
    if (it == object_index_.end()) return std::nullopt;
    std::size_t ai = identity_[it->second];
    if (ai == kNoIdentity) return std::nullopt;
    return arrows_[ai].id;
}

std::optional<std::size_t> FinCategory::object_index(const std::string& id) const {
    auto it = object_index_.find(id);
    if (it == object_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> FinCategory::arrow_index(const std::string& id) const {
    auto it = arrow_index_.find(id);
    if (it == arrow_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::uint32_t> FinCategory::composite_by_index(std::uint32_t g,
                                                             std::uint32_t f) const {
    std::uint64_t key = pack(g, f);
    auto it = std::lower_bound(compose_.begin(), compose_.end(), key,
                               [](const auto& e, std::uint64_t k) { return e.first < k; });
    if (it == compose_.end() || it->first != key) return std::nullopt;
    return it->second;
}

std::optional<std::string> FinCategory::composite(const std::string& g,
                                                  const std::string& f) const {
    auto gi = arrow_index(g);
    auto fi = arrow_index(f);
    if (!gi || !fi) return std::nullopt;
    auto ci = composite_by_index(static_cast<std::uint32_t>(*gi),
                                 static_cast<std::uint32_t>(*fi));
    if (!ci) return std::nullopt;
    return arrows_[*ci].id;
}

const std::vector<std::string>& FinCategory::arrows_from(const std::string& obj) const {
    static const std::vector<std::string> empty;
    auto i = object_index(obj);
    return i ? from_[*i] : empty;
}

const std::vector<std::string>& FinCategory::arrows_into(const std::string& obj) const {
    static const std::vector<std::string> empty;
    auto i = object_index(obj);
    return i ? into_[*i] : empty;
}

std::optional<std::size_t> FinCategory::index_of_object(const std::string& id) const {
    return object_index(id);
}

std::optional<std::size_t> FinCategory::index_of_arrow(const std::string& id) const {
    return arrow_index(id);
}

std::optional<std::size_t> FinCategory::composite_index(std::size_t g,
                                                        std::size_t f) const {
    auto r = composite_by_index(static_cast<std::uint32_t>(g),
                                static_cast<std::uint32_t>(f));
    if (!r) return std::nullopt;
    return static_cast<std::size_t>(*r);
}

std::vector<std::array<std::string, 3>> FinCategory::composite_entries() const {
    std::vector<std::array<std::string, 3>> out;
    out.reserve(compose_.size() + dangling_compose_.size());
    for (const auto& [key, h] : compose_) {
        std::uint32_t g = static_cast<std::uint32_t>(key >> 32);
        std::uint32_t f = static_cast<std::uint32_t>(key);
        out.push_back({arrows_[g].id, arrows_[f].id, arrows_[h].id});
    }
    for (const auto& e : dangling_compose_) out.push_back(e);
    std::sort(out.begin(), out.end());
    return out;
}

bool FinCategory::operator==(const FinCategory& other) const {
    if (objects_ != other.objects_ || arrows_ != other.arrows_) return false;
    if (identity_ != other.identity_) return false; // same arrow order on both sides
    if (compose_ != other.compose_) return false;
    return dangling_identities_ == other.dangling_identities_ &&
           dangling_compose_ == other.dangling_compose_;
}

CategoryRef make_category(FinCategory c) {
    return std::make_shared<const FinCategory>(std::move(c));
}

bool same_category(const CategoryRef& a, const CategoryRef& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

FinCategoryBuilder::FinCategoryBuilder(std::string name) : name_(std::move(name)) {}

std::size_t FinCategoryBuilder::add_object(std::string id) {
    if (!object_seen_.emplace(id, objects_.size()).second)
        throw ConstructionError("duplicate object '" + id + "' in category '" + name_ + "'");
    objects_.push_back(std::move(id));
    return objects_.size() - 1;
}

std::size_t FinCategoryBuilder::add_arrow(std::string id, std::string src,
                                          std::string tgt) {
    if (!arrow_seen_.emplace(id, arrows_.size()).second)
        throw ConstructionError("duplicate arrow '" + id + "' in category '" + name_ + "'");
    arrows_.push_back(Arrow{std::move(id), std::move(src), std::move(tgt)});
    return arrows_.size() - 1;
}

FinCategoryBuilder& FinCategoryBuilder::set_identity(const std::string& obj,
                                                     const std::string& arrow) {
    auto oi = object_seen_.find(obj);
    auto ai = arrow_seen_.find(arrow);
    if (oi == object_seen_.end() || ai == arrow_seen_.end())
        identity_dangling_.emplace_back(obj, arrow);
    else
        identities_indexed_.emplace_back(oi->second, ai->second);
    return *this;
}

void FinCategoryBuilder::set_identity_indices(std::size_t obj, std::size_t arrow) {
    identities_indexed_.emplace_back(obj, arrow);
}

void FinCategoryBuilder::set_composite_indices(std::size_t g, std::size_t f,
                                               std::size_t gf) {
    compose_packed_.emplace_back(pack(static_cast<std::uint32_t>(g),
                                      static_cast<std::uint32_t>(f)),
                                 static_cast<std::uint32_t>(gf));
}

FinCategoryBuilder& FinCategoryBuilder::set_composite(const std::string& g,
                                                      const std::string& f,
                                                      const std::string& gf) {
    auto gi = arrow_seen_.find(g);
    auto fi = arrow_seen_.find(f);
    auto hi = arrow_seen_.find(gf);
    if (gi == arrow_seen_.end() || fi == arrow_seen_.end() || hi == arrow_seen_.end()) {
        compose_dangling_.push_back({g, f, gf});
        return *this;
    }
    compose_packed_.emplace_back(pack(static_cast<std::uint32_t>(gi->second),
                                      static_cast<std::uint32_t>(fi->second)),
                                 static_cast<std::uint32_t>(hi->second));
    return *this;
}

FinCategory FinCategoryBuilder::build() {
    FinCategory c;
    c.name_ = std::move(name_);

    // Sort objects and arrows by name; remap index-based entries.
    std::vector<std::uint32_t> obj_perm(objects_.size());
    std::iota(obj_perm.begin(), obj_perm.end(), 0u);
    std::sort(obj_perm.begin(), obj_perm.end(), [&](std::uint32_t a, std::uint32_t b) {
        return objects_[a] < objects_[b];
    });
    std::vector<std::uint32_t> obj_where(objects_.size());
    for (std::uint32_t i = 0; i < obj_perm.size(); ++i) obj_where[obj_perm[i]] = i;
    c.objects_.reserve(objects_.size());
    for (std::uint32_t i : obj_perm) c.objects_.push_back(std::move(objects_[i]));
    for (std::size_t i = 0; i < c.objects_.size(); ++i)
        c.object_index_.emplace(c.objects_[i], i);

    std::vector<std::uint32_t> perm(arrows_.size());
    std::iota(perm.begin(), perm.end(), 0u);
    std::sort(perm.begin(), perm.end(), [&](std::uint32_t a, std::uint32_t b) {
        return arrows_[a].id < arrows_[b].id;
    });
    std::vector<std::uint32_t> where(arrows_.size());
    for (std::uint32_t i = 0; i < perm.size(); ++i) where[perm[i]] = i;

    c.arrows_.reserve(arrows_.size());
    for (std::uint32_t i : perm) c.arrows_.push_back(std::move(arrows_[i]));
    for (std::size_t i = 0; i < c.arrows_.size(); ++i)
        c.arrow_index_.emplace(c.arrows_[i].id, i);

    c.compose_.reserve(compose_packed_.size());
    for (auto [key, h] : compose_packed_) {
        std::uint32_t g = where[static_cast<std::uint32_t>(key >> 32)];
        std::uint32_t f = where[static_cast<std::uint32_t>(key)];
        c.compose_.emplace_back(pack(g, f), where[h]);
    }
    std::sort(c.compose_.begin(), c.compose_.end());
    // Keep the last entry when the same pair was set twice.
    c.compose_.erase(std::unique(c.compose_.begin(), c.compose_.end(),
                                 [](const auto& a, const auto& b) {
                                     return a.first == b.first;
                                 }),
                     c.compose_.end());

    c.identity_.assign(c.objects_.size(), kNoIdentity);
    for (auto [oi, ai] : identities_indexed_) c.identity_[obj_where[oi]] = where[ai];
    c.dangling_identities_ = std::move(identity_dangling_);
    std::sort(c.dangling_identities_.begin(), c.dangling_identities_.end());

    c.dangling_compose_ = std::move(compose_dangling_);
    std::sort(c.dangling_compose_.begin(), c.dangling_compose_.end());

    c.from_.resize(c.objects_.size());
    c.into_.resize(c.objects_.size());
    c.from_idx_.resize(c.objects_.size());
    for (std::size_t k = 0; k < c.arrows_.size(); ++k) {
        const Arrow& a = c.arrows_[k];
        if (auto si = c.object_index(a.src)) {
            c.from_[*si].push_back(a.id);
            c.from_idx_[*si].push_back(static_cast<std::uint32_t>(k));
        }
        if (auto ti = c.object_index(a.tgt)) c.into_[*ti].push_back(a.id);
    }
    return c;
}

std::vector<std::string> validate_category(const FinCategory& c) {
    std::vector<std::string> bad;

    for (const Arrow& a : c.arrows_) {
        if (!c.has_object(a.src))
            bad.push_back("arrow '" + a.id + "' has unknown source '" + a.src + "'");
        if (!c.has_object(a.tgt))
            bad.push_back("arrow '" + a.id + "' has unknown target '" + a.tgt + "'");
    }
    for (const auto& [obj, arr] : c.dangling_identities_)
        bad.push_back("identity line references unknown name: '" + obj + "' = '" + arr + "'");
    for (const auto& e : c.dangling_compose_)
        bad.push_back("compose line references unknown arrow: " + e[0] + " . " + e[1] +
                      " = " + e[2]);

    for (std::size_t i = 0; i < c.objects_.size(); ++i) {
        if (c.identity_[i] == kNoIdentity) {
            bad.push_back("object '" + c.objects_[i] + "' has no identity arrow");
            continue;
        }
        const Arrow& id = c.arrows_[c.identity_[i]];
        if (id.src != c.objects_[i] || id.tgt != c.objects_[i])
            bad.push_back("identity of '" + c.objects_[i] + "' is '" + id.id +
                          "' whose endpoints are not that object");
    }

    // Composition table: entries well-typed, totality on composable pairs.
    for (const auto& [key, h] : c.compose_) {
        const Arrow& g = c.arrows_[key >> 32];
        const Arrow& f = c.arrows_[static_cast<std::uint32_t>(key)];
        const Arrow& gf = c.arrows_[h];
        if (f.tgt != g.src)
            bad.push_back("compose entry " + g.id + " . " + f.id + " for non-composable pair");
        if (gf.src != f.src || gf.tgt != g.tgt)
            bad.push_back("composite " + g.id + " . " + f.id + " = " + gf.id +
                          " has wrong endpoints");
    }
    for (std::uint32_t fi = 0; fi < c.arrows_.size(); ++fi) {
        const Arrow& f = c.arrows_[fi];
        auto ti = c.object_index(f.tgt);
        if (!ti) continue;
        for (const std::string& gid : c.from_[*ti]) {
            std::uint32_t gi = static_cast<std::uint32_t>(*c.arrow_index(gid));
            if (!c.composite_by_index(gi, fi))
                bad.push_back("missing composite: " + gid + " . " + f.id);
        }
    }
    if (!bad.empty()) return bad; // law checks below assume a total table

    // Identity laws.
    for (std::uint32_t fi = 0; fi < c.arrows_.size(); ++fi) {
        const Arrow& f = c.arrows_[fi];
        auto si = c.object_index(f.src);
        auto ti = c.object_index(f.tgt);
        std::uint32_t ids = static_cast<std::uint32_t>(c.identity_[*si]);
        std::uint32_t idt = static_cast<std::uint32_t>(c.identity_[*ti]);
        if (auto r = c.composite_by_index(fi, ids); !r || *r != fi)
            bad.push_back("right identity law fails for '" + f.id + "'");
        if (auto l = c.composite_by_index(idt, fi); !l || *l != fi)
            bad.push_back("left identity law fails for '" + f.id + "'");
    }

    // Associativity by exhaustive enumeration of composable triples.
    std::vector<std::vector<std::uint32_t>> from_idx(c.objects_.size());
    for (std::uint32_t ai = 0; ai < c.arrows_.size(); ++ai)
        if (auto si = c.object_index(c.arrows_[ai].src))
            from_idx[*si].push_back(ai);

    for (std::uint32_t fi = 0; fi < c.arrows_.size(); ++fi) {
        auto fti = c.object_index(c.arrows_[fi].tgt);
        for (std::uint32_t gi : from_idx[*fti]) {
            auto gf = c.composite_by_index(gi, fi);
            auto gti = c.object_index(c.arrows_[gi].tgt);
            for (std::uint32_t hi : from_idx[*gti]) {
                auto hg = c.composite_by_index(hi, gi);
                auto left = c.composite_by_index(hi, *gf);
                auto right = c.composite_by_index(*hg, fi);
                if (!left || !right || *left != *right) {
                    bad.push_back("associativity fails: (" + c.arrows_[hi].id + " . " +
                                  c.arrows_[gi].id + ") . " + c.arrows_[fi].id + " != " +
                                  c.arrows_[hi].id + " . (" + c.arrows_[gi].id + " . " +
                                  c.arrows_[fi].id + ")");
                    if (bad.size() > 64) return bad; // enough evidence
                }
            }
        }
    }
    return bad;
}

const std::string& Functor::on_object(const std::string& x) const {
    auto it = object_map.find(x);
    if (it == object_map.end())
        throw ReferenceError("functor '" + name + "' undefined on object '" + x + "'");
    return it->second;
}

const std::string& Functor::on_arrow(const std::string& f) const {
    auto it = arrow_map.find(f);
    if (it == arrow_map.end())
        throw ReferenceError("functor '" + name + "' undefined on arrow '" + f + "'");
    return it->second;
}

bool Functor::same_mapping(const Functor& other) const {
    return same_category(dom, other.dom) && same_category(cod, other.cod) &&
           object_map == other.object_map && arrow_map == other.arrow_map;
}

std::vector<std::string> validate_functor(const Functor& f) {
    std::vector<std::string> bad;
    if (!f.dom || !f.cod) {
        bad.push_back("functor '" + f.name + "' is missing a domain or codomain");
        return bad;
    }
    const FinCategory& D = *f.dom;
    const FinCategory& C = *f.cod;

    for (const std::string& x : D.objects()) {
        auto it = f.object_map.find(x);
        if (it == f.object_map.end())
            bad.push_back("object map undefined on '" + x + "'");
        else if (!C.has_object(it->second))
            bad.push_back("object map sends '" + x + "' to unknown '" + it->second + "'");
    }
    for (const Arrow& a : D.arrows()) {
        auto it = f.arrow_map.find(a.id);
        if (it == f.arrow_map.end()) {
            bad.push_back("arrow map undefined on '" + a.id + "'");
            continue;
        }
        if (!C.has_arrow(it->second)) {
            bad.push_back("arrow map sends '" + a.id + "' to unknown '" + it->second + "'");
            continue;
        }
        const Arrow& img = C.arrow(it->second);
        auto sx = f.object_map.find(a.src);
        auto tx = f.object_map.find(a.tgt);
        if (sx != f.object_map.end() && img.src != sx->second)
            bad.push_back("source not preserved on '" + a.id + "'");
        if (tx != f.object_map.end() && img.tgt != tx->second)
            bad.push_back("target not preserved on '" + a.id + "'");
    }
    if (!bad.empty()) return bad;

    for (const std::string& x : D.objects()) {
        const std::string& idx = D.identity_of(x);
        const std::string& want = C.identity_of(f.on_object(x));
        if (f.on_arrow(idx) != want)
            bad.push_back("identity preservation fails at '" + x + "': '" + idx +
                          "' maps to '" + f.on_arrow(idx) + "', expected '" + want + "'");
    }
    for (const auto& [g, ff, h] : D.composite_entries()) {
        auto img = C.composite(f.on_arrow(g), f.on_arrow(ff));
        if (!img || *img != f.on_arrow(h))
            bad.push_back("composition preservation fails on " + g + " . " + ff);
    }
    return bad;
}

Functor identity_functor(CategoryRef c) {
    Functor f;
    f.name = "id_" + c->name();
    f.dom = c;
    f.cod = c;
    for (const std::string& x : c->objects()) f.object_map.emplace(x, x);
    for (const Arrow& a : c->arrows()) f.arrow_map.emplace(a.id, a.id);
    return f;
}

Functor compose_functors(const Functor& g, const Functor& f) {
    if (!same_category(f.cod, g.dom))
        throw PreconditionError("compose_functors: codomain of '" + f.name +
                                "' differs from domain of '" + g.name + "'");
    Functor h;
    h.name = pair_name(g.name, f.name);
    h.dom = f.dom;
    h.cod = g.cod;
    for (const auto& [x, y] : f.object_map) h.object_map.emplace(x, g.on_object(y));
    for (const auto& [a, b] : f.arrow_map) h.arrow_map.emplace(a, g.on_arrow(b));
    return h;
}

OpfibrationCheck is_discrete_opfibration(const Functor& f) {
    const FinCategory& D = *f.dom;
    const FinCategory& C = *f.cod;
    for (const std::string& lam : D.objects()) {
        const std::string& base = f.on_object(lam);
        for (const std::string& e : C.arrows_from(base)) {
            std::size_t lifts = 0;
            for (const std::string& a : D.arrows_from(lam))
                if (f.on_arrow(a) == e) ++lifts;
            if (lifts != 1)
                return {false, OpfibrationWitness{lam, e, lifts}};
        }
    }
    return {true, std::nullopt};
}

ObjectBijectionCheck is_bijective_on_objects(const Functor& f) {
    std::map<std::string, std::string> hit; // codomain object -> preimage
    for (const std::string& x : f.dom->objects()) {
        const std::string& y = f.on_object(x);
        auto [it, fresh] = hit.emplace(y, x);
        if (!fresh)
            return {false, "objects '" + it->second + "' and '" + x + "' both map to '" +
                               y + "'"};
    }
    for (const std::string& y : f.cod->objects())
        if (!hit.count(y)) return {false, "object '" + y + "' is not hit"};
    return {true, {}};
}

std::vector<std::string> validate_span(const FunctorSpan& s) {
    std::vector<std::string> bad;
    if (s.legs.empty()) bad.push_back("span has no legs");
    for (const Functor& l : s.legs)
        if (!same_category(l.dom, s.peak))
            bad.push_back("leg '" + l.name + "' does not share the peak");
    return bad;
}

std::vector<std::string> validate_cospan(const FunctorCospan& s) {
    std::vector<std::string> bad;
    if (s.legs.empty()) bad.push_back("cospan has no legs");
    for (const Functor& l : s.legs)
        if (!same_category(l.cod, s.trough))
            bad.push_back("leg '" + l.name + "' does not share the trough");
    return bad;
}

PullbackResult pullback(const Functor& f, const Functor& g) {
    if (!same_category(f.cod, g.cod))
        throw PreconditionError("pullback: functors '" + f.name + "' and '" + g.name +
                                "' have different codomains");
    const FinCategory& A = *f.dom;
    const FinCategory& B = *g.dom;

    FinCategoryBuilder builder(pair_name(A.name(), B.name()));
    Functor H, Hp;
    H.name = pair_name(A.name(), B.name()) + ".left";
    Hp.name = pair_name(A.name(), B.name()) + ".right";
    H.dom = Hp.dom = nullptr; // set after build
    H.cod = f.dom;
    Hp.cod = g.dom;

    std::size_t object_count = 0;
    for (const std::string& x : A.objects())
        for (const std::string& y : B.objects()) {
            if (f.on_object(x) != g.on_object(y)) continue;
            if (++object_count > kPullbackMaxObjects)
                throw BoundExceededError("pullback object count exceeds bound");
            std::string n = pair_name(x, y);
            builder.add_object(n);
            H.object_map.emplace(n, x);
            Hp.object_map.emplace(n, y);
        }

    // Agreeing arrow pairs; endpoints are agreeing object pairs by
    // functoriality of f and g.
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const Arrow& p : A.arrows()) {
        const std::string& img = f.on_arrow(p.id);
        for (const Arrow& q : B.arrows()) {
            if (g.on_arrow(q.id) != img) continue;
            if (pairs.size() + 1 > kPullbackMaxArrows)
                throw BoundExceededError("pullback arrow count exceeds bound");
            std::string n = pair_name(p.id, q.id);
            builder.add_arrow(n, pair_name(p.src, q.src), pair_name(p.tgt, q.tgt));
            H.arrow_map.emplace(n, p.id);
            Hp.arrow_map.emplace(n, q.id);
            pairs.emplace_back(p.id, q.id);
        }
    }

    for (const std::string& x : A.objects())
        for (const std::string& y : B.objects())
            if (f.on_object(x) == g.on_object(y))
                builder.set_identity(pair_name(x, y),
                                     pair_name(A.identity_of(x), B.identity_of(y)));

    // Composition is componentwise; group by source object of the pair.
    std::map<std::string, std::vector<std::size_t>> by_src;
    std::vector<std::array<std::string, 4>> arr; // id, src, tgt via components
    arr.reserve(pairs.size());
    for (const auto& [pid, qid] : pairs) {
        const Arrow& p = A.arrow(pid);
        const Arrow& q = B.arrow(qid);
        arr.push_back({pair_name(pid, qid), pair_name(p.src, q.src),
                       pair_name(p.tgt, q.tgt), std::string{}});
        by_src[arr.back()[1]].push_back(arr.size() - 1);
    }
    std::size_t composites = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const Arrow& p1 = A.arrow(pairs[i].first);
        const Arrow& q1 = B.arrow(pairs[i].second);
        auto it = by_src.find(arr[i][2]);
        if (it == by_src.end()) continue;
        for (std::size_t j : it->second) {
            auto cp = A.composite(pairs[j].first, p1.id);
            auto cq = B.composite(pairs[j].second, q1.id);
            if (!cp || !cq) continue; // inputs invalid; validation will say so
            if (++composites > kPullbackMaxComposites)
                throw BoundExceededError("pullback composition table exceeds bound");
            builder.set_composite(arr[j][0], arr[i][0], pair_name(*cp, *cq));
        }
    }

    PullbackResult out;
    out.category = make_category(builder.build());
    H.dom = out.category;
    Hp.dom = out.category;
    out.to_left = std::move(H);
    out.to_right = std::move(Hp);
    return out;
}

namespace {

// One peak object's pruning signature: images under every leg plus
// degree data.  Objects can only map to objects with equal signatures.
std::string object_signature(const FunctorSpan& s, const std::string& x) {
    std::string sig;
    for (const Functor& leg : s.legs) {
        sig += leg.on_object(x);
        sig += '\x1f';
    }
    sig += std::to_string(s.peak->arrows_from(x).size());
    sig += '/';
    sig += std::to_string(s.peak->arrows_into(x).size());
    return sig;
}

// Arrow candidate filter under a fixed object bijection: endpoints and
// all leg images must match.
struct IsoSearch {
    const FunctorSpan& a;
    const FunctorSpan& b;
    std::map<std::string, std::string> obj_map;

    bool arrows_match(const Arrow& p, const Arrow& q) const {
        if (obj_map.at(p.src) != q.src || obj_map.at(p.tgt) != q.tgt) return false;
        for (std::size_t i = 0; i < a.legs.size(); ++i)
            if (a.legs[i].on_arrow(p.id) != b.legs[i].on_arrow(q.id)) return false;
        return true;
    }

    // Build an arrow bijection hom-set by hom-set with backtracking,
    // then check functoriality.
    bool match_arrows() {
        const auto& arrows = a.peak->arrows();
        std::map<std::string, std::string> arrow_map;
        std::set<std::string> used;
        if (!extend(arrows, 0, arrow_map, used)) return false;
        return true;
    }

    bool extend(const std::vector<Arrow>& arrows, std::size_t i,
                std::map<std::string, std::string>& arrow_map,
                std::set<std::string>& used) {
        if (i == arrows.size()) return functorial(arrow_map);
        const Arrow& p = arrows[i];
        for (const Arrow& q : b.peak->arrows()) {
            if (used.count(q.id) || !arrows_match(p, q)) continue;
            arrow_map.emplace(p.id, q.id);
            used.insert(q.id);
            if (extend(arrows, i + 1, arrow_map, used)) return true;
            arrow_map.erase(p.id);
            used.erase(q.id);
        }
        return false;
    }

    bool functorial(const std::map<std::string, std::string>& arrow_map) const {
        for (const std::string& x : a.peak->objects())
            if (arrow_map.at(a.peak->identity_of(x)) !=
                b.peak->identity_of(obj_map.at(x)))
                return false;
        for (const auto& [g, f, h] : a.peak->composite_entries()) {
            auto img = b.peak->composite(arrow_map.at(g), arrow_map.at(f));
            if (!img || *img != arrow_map.at(h)) return false;
        }
        return true;
    }
};

bool try_object_bijections(const FunctorSpan& a, const FunctorSpan& b,
                           const std::vector<std::vector<std::string>>& classes_a,
                           const std::vector<std::vector<std::string>>& classes_b,
                           std::size_t ci, std::size_t pos,
                           std::map<std::string, std::string>& obj_map,
                           std::set<std::string>& used) {
    if (ci == classes_a.size()) {
        IsoSearch search{a, b, obj_map};
        return search.match_arrows();
    }
    const auto& ca = classes_a[ci];
    const auto& cb = classes_b[ci];
    if (pos == ca.size())
        return try_object_bijections(a, b, classes_a, classes_b, ci + 1, 0, obj_map, used);
    for (const std::string& y : cb) {
        if (used.count(y)) continue;
        obj_map.emplace(ca[pos], y);
        used.insert(y);
        if (try_object_bijections(a, b, classes_a, classes_b, ci, pos + 1, obj_map, used))
            return true;
        obj_map.erase(ca[pos]);
        used.erase(y);
    }
    return false;
}

} // namespace

bool spans_isomorphic(const FunctorSpan& a, const FunctorSpan& b,
                      std::size_t max_peak_objects) {
    if (a.legs.size() != b.legs.size())
        throw PreconditionError("spans_isomorphic: different numbers of legs");
    for (std::size_t i = 0; i < a.legs.size(); ++i)
        if (!same_category(a.legs[i].cod, b.legs[i].cod))
            throw PreconditionError("spans_isomorphic: leg " + std::to_string(i) +
                                    " feet differ");

    if (a.peak->objects().size() != b.peak->objects().size()) return false;
    if (a.peak->arrows().size() != b.peak->arrows().size()) return false;
    if (a.peak->objects().size() > max_peak_objects)
        throw BoundExceededError("spans_isomorphic: peak exceeds search bound of " +
                                 std::to_string(max_peak_objects) + " objects");

    // Group peak objects by signature; signatures must match up.
    std::map<std::string, std::vector<std::string>> sig_a, sig_b;
    for (const std::string& x : a.peak->objects())
        sig_a[object_signature(a, x)].push_back(x);
    for (const std::string& y : b.peak->objects())
        sig_b[object_signature(b, y)].push_back(y);
    if (sig_a.size() != sig_b.size()) return false;

    std::vector<std::vector<std::string>> classes_a, classes_b;
    auto ia = sig_a.begin();
    auto ib = sig_b.begin();
    for (; ia != sig_a.end(); ++ia, ++ib) {
        if (ia->first != ib->first || ia->second.size() != ib->second.size())
            return false;
        classes_a.push_back(ia->second);
        classes_b.push_back(ib->second);
    }

    std::map<std::string, std::string> obj_map;
    std::set<std::string> used;
    return try_object_bijections(a, b, classes_a, classes_b, 0, 0, obj_map, used);
}

} // namespace lenscat
