#include "lenscat/scenario.hpp"

#include <algorithm>
#include <sstream>

namespace lenscat {

namespace {

constexpr std::size_t kMaxElements = 20;

std::string joined_set(const std::vector<std::string>& elems) {
    std::string out = "{";
    for (std::size_t i = 0; i < elems.size(); ++i) {
        if (i) out += ',';
        out += elems[i];
    }
    out += '}';
    return out;
}

bool subset_of(std::uint32_t a, std::uint32_t b) { return (a & ~b) == 0; }

std::string triple_id(const std::string& x, const std::string& y, const std::string& z) {
    return x + "." + y + "." + z;
}

} // namespace

ScenarioConfig ScenarioConfig::minimal() {
    ScenarioConfig cfg;
    cfg.frames = {"f1"};
    cfg.ys = {"y1"};
    cfg.zs = {"z1"};
    cfg.locations = {"XYZ-Warehouse", "Depot"};
    return cfg;
}

std::vector<std::string> validate_config(const ScenarioConfig& cfg) {
    std::vector<std::string> bad;
    if (cfg.frames.empty()) bad.push_back("frame universe is empty");
    if (cfg.ys.empty()) bad.push_back("Y universe is empty");
    if (cfg.zs.empty()) bad.push_back("Z universe is empty");
    if (cfg.locations.empty()) bad.push_back("location set is empty");
    if (std::find(cfg.locations.begin(), cfg.locations.end(), cfg.warehouse_location) ==
        cfg.locations.end())
        bad.push_back("location set does not contain the distinguished location '" +
                      cfg.warehouse_location + "'");
    auto check_unique = [&bad](const std::vector<std::string>& v, const char* what) {
        std::set<std::string> seen(v.begin(), v.end());
        if (seen.size() != v.size())
            bad.push_back(std::string("duplicate ids in the ") + what + " universe");
    };
    check_unique(cfg.frames, "frame");
    check_unique(cfg.ys, "Y");
    check_unique(cfg.zs, "Z");
    check_unique(cfg.locations, "location");
    return bad;
}

std::string SystemTables::set_name(std::uint32_t mask) const {
    if (labels.empty()) {
        std::vector<std::string> elems;
        for (std::size_t i = 0; i < elements.size(); ++i)
            if (mask & (1u << i)) elems.push_back(elements[i]);
        std::sort(elems.begin(), elems.end());
        return joined_set(elems);
    }
    std::string out = "[";
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (k) out += '|';
        out += labels[k];
        out += '=';
        std::vector<std::string> elems;
        for (std::size_t i = 0; i < elements.size(); ++i)
            if ((mask & (1u << i)) && kinds[i] == static_cast<int>(k))
                elems.push_back(elements[i]);
        std::sort(elems.begin(), elems.end());
        out += joined_set(elems);
    }
    out += ']';
    return out;
}

std::uint32_t SystemTables::mask_of(const std::set<std::string>& elems) const {
    std::uint32_t mask = 0;
    for (const std::string& e : elems) {
        auto it = element_index.find(e);
        if (it == element_index.end())
            throw ReferenceError("unknown scenario element '" + e + "'");
        mask |= 1u << it->second;
    }
    return mask;
}

std::string SystemTables::delta_name(std::uint32_t src, std::uint32_t tgt,
                                     std::uint32_t kept) const {
    return set_name(src) + ">" + set_name(tgt) + "!" + set_name(kept);
}

namespace {

// Shape-level data of a system category: states and survivor arrows as
// element masks, with composition worked out by index.  Independent of
// naming, so one shape can be emitted under several labelings.
struct SystemShape {
    std::vector<std::uint32_t> states;
    std::map<std::uint32_t, std::size_t> state_index;
    struct Arr {
        std::uint32_t src, tgt, kept;
    };
    std::vector<Arr> arrows;
    std::vector<std::array<std::size_t, 3>> composites; // g, f, gf arrow indices
    std::vector<std::size_t> identity_arrow;            // per state
};

SystemShape compute_shape(const std::string& what,
                          const std::vector<std::uint32_t>& dep_masks,
                          const std::function<bool(std::uint32_t)>& state_ok,
                          std::size_t max_objects, std::size_t max_arrows) {
    const std::size_t n = dep_masks.size();
    if (n > kMaxElements)
        throw BoundExceededError("system '" + what + "' has " + std::to_string(n) +
                                 " elements; universes are too large");
    auto dep_closed = [&](std::uint32_t mask) {
        for (std::size_t i = 0; i < n; ++i)
            if ((mask & (1u << i)) && !subset_of(dep_masks[i], mask)) return false;
        return true;
    };

    SystemShape shape;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (!dep_closed(mask)) continue;
        if (state_ok && !state_ok(mask)) continue;
        shape.state_index.emplace(mask, shape.states.size());
        shape.states.push_back(mask);
        if (shape.states.size() > max_objects)
            throw BoundExceededError("system '" + what +
                                     "' exceeds the object bound; universes too large");
    }

    std::map<std::array<std::uint32_t, 3>, std::size_t> arrow_index;
    for (std::uint32_t s : shape.states) {
        for (std::uint32_t t : shape.states) {
            std::uint32_t common = s & t;
            // every dependency-closed survivor subset of the overlap
            std::uint32_t sub = common;
            while (true) {
                if (dep_closed(sub)) {
                    if (shape.arrows.size() + 1 > max_arrows)
                        throw BoundExceededError("system '" + what +
                                                 "' exceeds the arrow bound");
                    arrow_index.emplace(std::array<std::uint32_t, 3>{s, t, sub},
                                        shape.arrows.size());
                    shape.arrows.push_back({s, t, sub});
                }
                if (sub == 0) break;
                sub = (sub - 1) & common;
            }
        }
    }

    shape.identity_arrow.reserve(shape.states.size());
    for (std::uint32_t s : shape.states)
        shape.identity_arrow.push_back(arrow_index.at({s, s, s}));

    std::map<std::uint32_t, std::vector<std::size_t>> by_src;
    for (std::size_t i = 0; i < shape.arrows.size(); ++i)
        by_src[shape.arrows[i].src].push_back(i);
    shape.composites.reserve(shape.arrows.size() * 4);
    for (std::size_t fi = 0; fi < shape.arrows.size(); ++fi) {
        const auto& f = shape.arrows[fi];
        auto it = by_src.find(f.tgt);
        if (it == by_src.end()) continue;
        for (std::size_t gi : it->second) {
            const auto& g = shape.arrows[gi];
            std::size_t hi = arrow_index.at({f.src, g.tgt, f.kept & g.kept});
            shape.composites.push_back({gi, fi, hi});
        }
    }
    return shape;
}

ScenarioSystem emit_system(const std::string& name, SystemTables tables,
                           const SystemShape& shape) {
    for (std::size_t i = 0; i < tables.elements.size(); ++i)
        tables.element_index.emplace(tables.elements[i], i);

    FinCategoryBuilder b(name);
    std::vector<std::size_t> state_obj(shape.states.size());
    for (std::size_t i = 0; i < shape.states.size(); ++i) {
        std::uint32_t s = shape.states[i];
        std::string sn = tables.set_name(s);
        tables.state_mask.emplace(sn, s);
        tables.state_name.emplace(s, sn);
        state_obj[i] = b.add_object(std::move(sn));
    }

    std::vector<std::size_t> arrow_ids(shape.arrows.size());
    for (std::size_t i = 0; i < shape.arrows.size(); ++i) {
        const auto& a = shape.arrows[i];
        const std::string& sn = tables.state_name.at(a.src);
        const std::string& tn = tables.state_name.at(a.tgt);
        // survivor sets are usually states themselves (dependency-closed
        // subsets of valid states), so their names are interned already
        auto kit = tables.state_name.find(a.kept);
        std::string kn = kit != tables.state_name.end() ? kit->second
                                                        : tables.set_name(a.kept);
        std::string id;
        id.reserve(sn.size() + tn.size() + kn.size() + 2);
        id += sn;
        id += '>';
        id += tn;
        id += '!';
        id += kn;
        arrow_ids[i] = b.add_arrow(std::move(id), sn, tn);
    }
    for (std::size_t i = 0; i < shape.states.size(); ++i)
        b.set_identity_indices(state_obj[i], arrow_ids[shape.identity_arrow[i]]);
    b.reserve_composites(shape.composites.size());
    for (const auto& [g, f, h] : shape.composites)
        b.set_composite_indices(arrow_ids[g], arrow_ids[f], arrow_ids[h]);

    ScenarioSystem sys;
    sys.category = make_category(b.build());
    sys.tables = std::move(tables);
    return sys;
}

ScenarioSystem build_system(const std::string& name, SystemTables tables,
                            const std::function<bool(std::uint32_t)>& state_ok,
                            std::size_t max_objects, std::size_t max_arrows) {
    SystemShape shape =
        compute_shape(name, tables.dep_masks, state_ok, max_objects, max_arrows);
    return emit_system(name, std::move(tables), shape);
}

// A lens between two element systems.  `visible` maps source elements
// to view elements (injectively); the Get restricts states and
// survivor sets to the visible part.  The Put replaces the visible
// part by the view delta; hidden elements survive exactly when all of
// their prerequisites survive, so deletions cascade and independent
// hidden data is pinned.
AsymmetricLens element_lens(const std::string& name, const ScenarioSystem& src,
                            const ScenarioSystem& view,
                            const std::map<std::string, std::string>& visible) {
    const SystemTables& st = src.tables;
    const SystemTables& vt = view.tables;
    const std::size_t n = st.elements.size();

    std::uint32_t visible_mask = 0;
    std::vector<std::int32_t> to_view(n, -1);
    std::vector<std::int32_t> from_view(vt.elements.size(), -1);
    for (const auto& [se, ve] : visible) {
        std::size_t si = st.element_index.at(se);
        std::size_t vi = vt.element_index.at(ve);
        visible_mask |= 1u << si;
        to_view[si] = static_cast<std::int32_t>(vi);
        if (from_view[vi] != -1)
            throw PreconditionError("element_lens: view element '" + ve + "' hit twice");
        from_view[vi] = static_cast<std::int32_t>(si);
    }

    auto project = [&](std::uint32_t mask) {
        std::uint32_t out = 0;
        for (std::size_t i = 0; i < n; ++i)
            if ((mask & (1u << i)) && to_view[i] != -1) out |= 1u << to_view[i];
        return out;
    };
    auto embed = [&](std::uint32_t vmask) {
        std::uint32_t out = 0;
        for (std::size_t i = 0; i < vt.elements.size(); ++i)
            if ((vmask & (1u << i)) && from_view[i] != -1) out |= 1u << from_view[i];
        return out;
    };

    Functor get;
    get.name = name + ".get";
    get.dom = src.category;
    get.cod = view.category;
    for (const auto& [sn, mask] : st.state_mask)
        get.object_map.emplace(sn, vt.state_name.at(project(mask)));
    for (const Arrow& a : src.category->arrows()) {
        std::size_t gt = a.id.find('>');
        std::size_t bang = a.id.find('!', gt);
        std::uint32_t s = st.state_mask.at(a.id.substr(0, gt));
        std::uint32_t t = st.state_mask.at(a.id.substr(gt + 1, bang - gt - 1));
        std::uint32_t k = st.state_mask.at(a.id.substr(bang + 1));
        get.arrow_map.emplace(a.id, vt.delta_name(project(s), project(t), project(k)));
    }

    PutRule rule = [&st, &vt, visible_mask, project, embed](const std::string& sn,
                                                            const std::string& dn) {
        std::uint32_t s = st.state_mask.at(sn);
        std::size_t gt = dn.find('>');
        std::size_t bang = dn.find('!', gt);
        std::uint32_t vt_tgt = vt.state_mask.at(dn.substr(gt + 1, bang - gt - 1));
        std::uint32_t vt_kept = vt.state_mask.at(dn.substr(bang + 1));

        std::uint32_t kept = embed(vt_kept);
        std::uint32_t hidden = s & ~visible_mask;
        // hidden survivors: prerequisites must survive; iterate to a
        // fixed point since prerequisites may be hidden themselves
        while (true) {
            std::uint32_t next = kept;
            for (std::size_t i = 0; i < st.elements.size(); ++i) {
                std::uint32_t bit = 1u << i;
                if ((hidden & bit) && !(next & bit) && subset_of(st.dep_masks[i], next))
                    next |= bit;
            }
            if (next == kept) break;
            kept = next;
        }
        std::uint32_t tgt = embed(vt_tgt) | (kept & ~visible_mask);
        return st.delta_name(s, tgt, kept);
    };

    return lens_from_put(name, src.category, view.category, std::move(get), rule);
}

enum Kind { kX = 0, kY = 1, kZ = 2, kOrders = 3 };

SystemTables stock_tables(const ScenarioConfig& cfg, std::vector<std::string> labels) {
    SystemTables t;
    t.labels = std::move(labels);
    for (const std::string& f : cfg.frames) {
        t.elements.push_back(f);
        t.kinds.push_back(kX);
        t.dep_masks.push_back(0);
    }
    for (const std::string& y : cfg.ys) {
        t.elements.push_back(y);
        t.kinds.push_back(kY);
        t.dep_masks.push_back(0);
    }
    for (const std::string& z : cfg.zs) {
        t.elements.push_back(z);
        t.kinds.push_back(kZ);
        t.dep_masks.push_back(0);
    }
    std::size_t nf = cfg.frames.size(), ny = cfg.ys.size(), nz = cfg.zs.size();
    for (std::size_t i = 0; i < nf; ++i)
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t k = 0; k < nz; ++k) {
                t.elements.push_back(triple_id(cfg.frames[i], cfg.ys[j], cfg.zs[k]));
                t.kinds.push_back(kOrders);
                t.dep_masks.push_back((1u << i) | (1u << (nf + j)) | (1u << (nf + ny + k)));
            }
    return t;
}

// Orders may not share a frame, a Y or a Z: the projections from the
// order set must be injective.
std::function<bool(std::uint32_t)> monic_orders(const SystemTables& t) {
    struct Dep {
        std::uint32_t bit, deps;
    };
    std::vector<Dep> orders;
    for (std::size_t i = 0; i < t.elements.size(); ++i)
        if (t.kinds[i] == kOrders) orders.push_back({1u << i, t.dep_masks[i]});
    return [orders](std::uint32_t mask) {
        for (std::size_t a = 0; a < orders.size(); ++a) {
            if (!(mask & orders[a].bit)) continue;
            for (std::size_t b = a + 1; b < orders.size(); ++b)
                if ((mask & orders[b].bit) && (orders[a].deps & orders[b].deps)) return false;
        }
        return true;
    };
}

} // namespace

ScenarioSystem build_abc_system(const ScenarioConfig& cfg) {
    auto bad = validate_config(cfg);
    if (!bad.empty()) throw PreconditionError("scenario config: " + bad.front());
    SystemTables t;
    for (const std::string& f : cfg.frames)
        for (const std::string& loc : cfg.locations) {
            t.elements.push_back(f + "@" + loc);
            t.kinds.push_back(0);
            t.dep_masks.push_back(0);
        }
    return build_system("ABC-Frames", std::move(t), nullptr, cfg.max_objects,
                        cfg.max_arrows);
}

ScenarioSystem build_x_foot_system(const ScenarioConfig& cfg) {
    auto bad = validate_config(cfg);
    if (!bad.empty()) throw PreconditionError("scenario config: " + bad.front());
    SystemTables t;
    for (const std::string& f : cfg.frames) {
        t.elements.push_back(f);
        t.kinds.push_back(0);
        t.dep_masks.push_back(0);
    }
    return build_system("X", std::move(t), nullptr, cfg.max_objects, cfg.max_arrows);
}

ScenarioSystem build_warehouse_system(const ScenarioConfig& cfg) {
    auto bad = validate_config(cfg);
    if (!bad.empty()) throw PreconditionError("scenario config: " + bad.front());
    SystemTables t = stock_tables(cfg, {"X", "Y", "Z", "O"});
    auto ok = monic_orders(t);
    return build_system("XYZ-Warehouse", std::move(t), ok, cfg.max_objects, cfg.max_arrows);
}

ScenarioSystem build_orders_foot_system(const ScenarioConfig& cfg) {
    auto bad = validate_config(cfg);
    if (!bad.empty()) throw PreconditionError("scenario config: " + bad.front());
    SystemTables t = stock_tables(cfg, {"Xc", "Yc", "Zc", "O"});
    auto ok = monic_orders(t);
    return build_system("Orders", std::move(t), ok, cfg.max_objects, cfg.max_arrows);
}

ScenarioSystem build_logistics_system(const ScenarioConfig& cfg) {
    auto bad = validate_config(cfg);
    if (!bad.empty()) throw PreconditionError("scenario config: " + bad.front());
    SystemTables t = stock_tables(cfg, {"Xc", "Yc", "Zc", "A"});
    auto ok = monic_orders(t);
    return build_system("XYZ-Logistics", std::move(t), ok, cfg.max_objects,
                        cfg.max_arrows);
}

CategoryRef build_abc_category(const ScenarioConfig& cfg) {
    return build_abc_system(cfg).category;
}
CategoryRef build_x_foot(const ScenarioConfig& cfg) {
    return build_x_foot_system(cfg).category;
}
CategoryRef build_warehouse_category(const ScenarioConfig& cfg) {
    return build_warehouse_system(cfg).category;
}
CategoryRef build_orders_foot(const ScenarioConfig& cfg) {
    return build_orders_foot_system(cfg).category;
}
CategoryRef build_logistics_category(const ScenarioConfig& cfg) {
    return build_logistics_system(cfg).category;
}

namespace {

std::map<std::string, std::string> warehouse_visibility(const ScenarioConfig& cfg) {
    std::map<std::string, std::string> vis;
    for (const std::string& f : cfg.frames) vis.emplace(f + "@" + cfg.warehouse_location, f);
    return vis;
}

std::map<std::string, std::string> identity_visibility(const SystemTables& t) {
    std::map<std::string, std::string> vis;
    for (const std::string& e : t.elements) vis.emplace(e, e);
    return vis;
}

std::map<std::string, std::string> frames_visibility(const ScenarioConfig& cfg) {
    std::map<std::string, std::string> vis;
    for (const std::string& f : cfg.frames) vis.emplace(f, f);
    return vis;
}

} // namespace

ScenarioModel build_scenario(const ScenarioConfig& cfg) {
    auto bad = validate_config(cfg);
    if (!bad.empty()) throw PreconditionError("scenario config: " + bad.front());

    ScenarioModel m;
    m.config = cfg;
    m.abc = build_abc_system(cfg);
    m.x_foot = build_x_foot_system(cfg);

    // The three stock-shaped systems share one shape computation and
    // differ only in labeling.
    SystemTables wt = stock_tables(cfg, {"X", "Y", "Z", "O"});
    SystemShape shape = compute_shape("stock", wt.dep_masks, monic_orders(wt),
                                      cfg.max_objects, cfg.max_arrows);
    m.warehouse = emit_system("XYZ-Warehouse", std::move(wt), shape);
    m.orders_foot =
        emit_system("Orders", stock_tables(cfg, {"Xc", "Yc", "Zc", "O"}), shape);
    m.logistics =
        emit_system("XYZ-Logistics", stock_tables(cfg, {"Xc", "Yc", "Zc", "A"}), shape);

    m.abc_to_x = element_lens("abc_to_x", m.abc, m.x_foot, warehouse_visibility(cfg));
    m.warehouse_to_x =
        element_lens("warehouse_to_x", m.warehouse, m.x_foot, frames_visibility(cfg));
    m.warehouse_to_orders = element_lens("warehouse_to_orders", m.warehouse,
                                         m.orders_foot,
                                         identity_visibility(m.warehouse.tables));
    m.logistics_to_orders = element_lens("logistics_to_orders", m.logistics,
                                         m.orders_foot,
                                         identity_visibility(m.logistics.tables));
    return m;
}

AsymmetricLens abc_to_x_lens(const ScenarioConfig& cfg) {
    auto abc = build_abc_system(cfg);
    auto x = build_x_foot_system(cfg);
    return element_lens("abc_to_x", abc, x, warehouse_visibility(cfg));
}

AsymmetricLens warehouse_to_x_lens(const ScenarioConfig& cfg) {
    auto wh = build_warehouse_system(cfg);
    auto x = build_x_foot_system(cfg);
    return element_lens("warehouse_to_x", wh, x, frames_visibility(cfg));
}

AsymmetricLens warehouse_to_orders_lens(const ScenarioConfig& cfg) {
    auto wh = build_warehouse_system(cfg);
    auto foot = build_orders_foot_system(cfg);
    return element_lens("warehouse_to_orders", wh, foot,
                        identity_visibility(wh.tables));
}

AsymmetricLens logistics_to_orders_lens(const ScenarioConfig& cfg) {
    auto log = build_logistics_system(cfg);
    auto foot = build_orders_foot_system(cfg);
    return element_lens("logistics_to_orders", log, foot,
                        identity_visibility(log.tables));
}

Multilens build_supply_chain_5lens(const ScenarioModel& model) {
    Multilens m = fuse_zigzag({model.frames_cospan(), model.orders_cospan()});
    m.name = "supply-chain";
    return m;
}

Multilens build_supply_chain_5lens(const ScenarioConfig& cfg) {
    return build_supply_chain_5lens(build_scenario(cfg));
}

ScenarioSession::ScenarioSession(ScenarioConfig cfg)
    : ScenarioSession(build_scenario(std::move(cfg))) {}

ScenarioSession::ScenarioSession(ScenarioModel model) : model_(std::move(model)) {
    abc_state_ = model_.abc.tables.state_name.at(0);
    warehouse_state_ = model_.warehouse.tables.state_name.at(0);
    logistics_state_ = model_.logistics.tables.state_name.at(0);
}

bool ScenarioSession::synchronized() const {
    return synchronized_cospan(model_.frames_cospan(), abc_state_, warehouse_state_) &&
           synchronized_cospan(model_.orders_cospan(), warehouse_state_,
                               logistics_state_);
}

CommandResult ScenarioSession::propagate_from_abc(std::uint32_t tgt, std::uint32_t kept) {
    const SystemTables& t = model_.abc.tables;
    std::string delta = t.delta_name(abc_mask_, tgt, kept);

    CommandResult res;
    res.accepted = true;
    PropagationTrace frames = forward_cospan(model_.frames_cospan(),
                                             SyncPair{abc_state_, warehouse_state_}, delta);
    res.traces.push_back({"frames", frames});
    PropagationTrace orders =
        forward_cospan(model_.orders_cospan(),
                       SyncPair{warehouse_state_, logistics_state_}, frames.output);
    res.traces.push_back({"orders", orders});

    abc_mask_ = tgt;
    abc_state_ = t.state_name.at(tgt);
    warehouse_state_ = frames.result.right;
    warehouse_mask_ = model_.warehouse.tables.state_mask.at(warehouse_state_);
    logistics_state_ = orders.result.right;
    logistics_mask_ = model_.logistics.tables.state_mask.at(logistics_state_);
    if (!synchronized())
        throw ConstructionError("scenario: world lost synchronisation after a command");
    return res;
}

CommandResult ScenarioSession::propagate_from_warehouse(std::uint32_t tgt,
                                                        std::uint32_t kept) {
    const SystemTables& t = model_.warehouse.tables;
    std::string delta = t.delta_name(warehouse_mask_, tgt, kept);

    CommandResult res;
    res.accepted = true;
    PropagationTrace frames = backward_cospan(model_.frames_cospan(),
                                              SyncPair{abc_state_, warehouse_state_}, delta);
    res.traces.push_back({"frames", frames});
    PropagationTrace orders = forward_cospan(
        model_.orders_cospan(), SyncPair{warehouse_state_, logistics_state_}, delta);
    res.traces.push_back({"orders", orders});

    warehouse_mask_ = tgt;
    warehouse_state_ = t.state_name.at(tgt);
    abc_state_ = frames.result.left;
    abc_mask_ = model_.abc.tables.state_mask.at(abc_state_);
    logistics_state_ = orders.result.right;
    logistics_mask_ = model_.logistics.tables.state_mask.at(logistics_state_);
    if (!synchronized())
        throw ConstructionError("scenario: world lost synchronisation after a command");
    return res;
}

CommandResult ScenarioSession::propagate_from_logistics(std::uint32_t tgt,
                                                        std::uint32_t kept) {
    const SystemTables& t = model_.logistics.tables;
    std::string delta = t.delta_name(logistics_mask_, tgt, kept);

    CommandResult res;
    res.accepted = true;
    PropagationTrace orders = backward_cospan(
        model_.orders_cospan(), SyncPair{warehouse_state_, logistics_state_}, delta);
    res.traces.push_back({"orders", orders});
    PropagationTrace frames = backward_cospan(
        model_.frames_cospan(), SyncPair{abc_state_, warehouse_state_}, orders.output);
    res.traces.push_back({"frames", frames});

    logistics_mask_ = tgt;
    logistics_state_ = t.state_name.at(tgt);
    warehouse_state_ = orders.result.left;
    warehouse_mask_ = model_.warehouse.tables.state_mask.at(warehouse_state_);
    abc_state_ = frames.result.left;
    abc_mask_ = model_.abc.tables.state_mask.at(abc_state_);
    if (!synchronized())
        throw ConstructionError("scenario: world lost synchronisation after a command");
    return res;
}

CommandResult ScenarioSession::add_frame(const std::string& frame,
                                         const std::string& location) {
    const ScenarioConfig& cfg = model_.config;
    if (std::find(cfg.frames.begin(), cfg.frames.end(), frame) == cfg.frames.end() ||
        std::find(cfg.locations.begin(), cfg.locations.end(), location) ==
            cfg.locations.end())
        return {false, "rejected: unknown id", {}};
    const SystemTables& t = model_.abc.tables;
    std::uint32_t bit = 1u << t.element_index.at(frame + "@" + location);
    if (abc_mask_ & bit) return {false, "rejected: already present", {}};
    return propagate_from_abc(abc_mask_ | bit, abc_mask_);
}

CommandResult ScenarioSession::remove_frame(const std::string& frame) {
    const ScenarioConfig& cfg = model_.config;
    if (std::find(cfg.frames.begin(), cfg.frames.end(), frame) == cfg.frames.end())
        return {false, "rejected: unknown id", {}};
    const SystemTables& t = model_.abc.tables;
    std::uint32_t bits = 0;
    for (const std::string& loc : cfg.locations)
        bits |= 1u << t.element_index.at(frame + "@" + loc);
    if (!(abc_mask_ & bits)) return {false, "rejected: not present", {}};
    std::uint32_t tgt = abc_mask_ & ~bits;
    return propagate_from_abc(tgt, tgt);
}

CommandResult ScenarioSession::stock_part(const std::string& part) {
    const ScenarioConfig& cfg = model_.config;
    bool is_y = std::find(cfg.ys.begin(), cfg.ys.end(), part) != cfg.ys.end();
    bool is_z = std::find(cfg.zs.begin(), cfg.zs.end(), part) != cfg.zs.end();
    if (!is_y && !is_z) return {false, "rejected: unknown id", {}};
    const SystemTables& t = model_.warehouse.tables;
    std::uint32_t bit = 1u << t.element_index.at(part);
    if (warehouse_mask_ & bit) return {false, "rejected: already present", {}};
    return propagate_from_warehouse(warehouse_mask_ | bit, warehouse_mask_);
}

CommandResult ScenarioSession::remove_part(const std::string& part) {
    const ScenarioConfig& cfg = model_.config;
    bool is_y = std::find(cfg.ys.begin(), cfg.ys.end(), part) != cfg.ys.end();
    bool is_z = std::find(cfg.zs.begin(), cfg.zs.end(), part) != cfg.zs.end();
    if (!is_y && !is_z) return {false, "rejected: unknown id", {}};
    const SystemTables& t = model_.warehouse.tables;
    std::uint32_t bit = 1u << t.element_index.at(part);
    if (!(warehouse_mask_ & bit)) return {false, "rejected: not present", {}};
    // deleting a part cascades to any order that uses it
    std::uint32_t tgt = warehouse_mask_ & ~bit;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < t.elements.size(); ++i)
            if ((tgt & (1u << i)) && !subset_of(t.dep_masks[i], tgt)) {
                tgt &= ~(1u << i);
                changed = true;
            }
    }
    return propagate_from_warehouse(tgt, tgt);
}

CommandResult ScenarioSession::place_order(const std::string& x, const std::string& y,
                                           const std::string& z) {
    const SystemTables& t = model_.logistics.tables;
    auto it = t.element_index.find(triple_id(x, y, z));
    if (it == t.element_index.end()) return {false, "rejected: unknown id", {}};
    std::size_t ti = it->second;
    std::uint32_t bit = 1u << ti;

    // The assembly must come from the catalogue pages.
    if (!subset_of(t.dep_masks[ti], logistics_mask_))
        return {false, "rejected: not in catalogue", {}};
    // One extant order per frame, Y and Z: the monic constraint.
    for (std::size_t i = 0; i < t.elements.size(); ++i)
        if (t.kinds[i] == 3 && (logistics_mask_ & (1u << i)) &&
            (t.dep_masks[i] & t.dep_masks[ti]))
            return {false, "rejected: monic constraint", {}};

    return propagate_from_logistics(logistics_mask_ | bit, logistics_mask_);
}

CommandResult ScenarioSession::cancel_order(const std::string& x, const std::string& y,
                                            const std::string& z) {
    const SystemTables& t = model_.logistics.tables;
    auto it = t.element_index.find(triple_id(x, y, z));
    if (it == t.element_index.end()) return {false, "rejected: unknown id", {}};
    std::uint32_t bit = 1u << it->second;
    if (!(logistics_mask_ & bit)) return {false, "rejected: no such order", {}};
    std::uint32_t tgt = logistics_mask_ & ~bit;
    return propagate_from_logistics(tgt, tgt);
}

CommandResult ScenarioSession::edit_catalogue_from_logistics(const std::string&) {
    return {false, "rejected: half-duplex", {}};
}

CommandResult ScenarioSession::run_line(const std::string& line) {
    std::istringstream in(line);
    std::string cmd;
    in >> cmd;
    std::vector<std::string> args;
    for (std::string a; in >> a;) args.push_back(a);

    auto want = [&](std::size_t k) {
        if (args.size() != k)
            throw ParseError(0, "command '" + cmd + "' expects " + std::to_string(k) +
                                    " argument(s)");
    };
    if (cmd == "add-frame") {
        want(2);
        return add_frame(args[0], args[1]);
    }
    if (cmd == "remove-frame") {
        want(1);
        return remove_frame(args[0]);
    }
    if (cmd == "stock-part") {
        want(1);
        return stock_part(args[0]);
    }
    if (cmd == "remove-part") {
        want(1);
        return remove_part(args[0]);
    }
    if (cmd == "place-order") {
        want(3);
        return place_order(args[0], args[1], args[2]);
    }
    if (cmd == "cancel-order") {
        want(3);
        return cancel_order(args[0], args[1], args[2]);
    }
    if (cmd == "logistics-edit-catalogue")
        return edit_catalogue_from_logistics(line);
    throw ParseError(0, "unknown scenario command '" + cmd + "'");
}

} // namespace lenscat
