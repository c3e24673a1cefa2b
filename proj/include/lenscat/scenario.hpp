#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lenscat/multilens.hpp"
#include "lenscat/propagate.hpp"

namespace lenscat {

/// Bounded universes for the supply-chain model.  The defaults are
/// sized so that every category builds extensionally and the law
/// suites run in seconds.
struct ScenarioConfig {
    std::vector<std::string> frames{"f1", "f2"};
    std::vector<std::string> ys{"y1"};
    std::vector<std::string> zs{"z1"};
    std::vector<std::string> locations{"XYZ-Warehouse", "Depot"};
    std::string warehouse_location{"XYZ-Warehouse"};
    std::size_t max_objects = 500;
    std::size_t max_arrows = 60000;

    /// Smallest config on which the pullback-level checks (coincidence
    /// of propagations, the five-legged span) stay tiny.
    static ScenarioConfig minimal();
};

std::vector<std::string> validate_config(const ScenarioConfig& cfg);

/// Element-level bookkeeping for one system category: every state is a
/// set of elements, encoded as a bit mask over `elements`.
struct SystemTables {
    std::vector<std::string> elements;
    std::vector<std::uint32_t> dep_masks; // element -> prerequisites mask
    std::vector<int> kinds;               // partition tag per element
    std::vector<std::string> labels;      // label per kind; empty = plain set names
    std::map<std::string, std::size_t> element_index;
    std::map<std::string, std::uint32_t> state_mask; // state name -> mask
    std::map<std::uint32_t, std::string> state_name;

    std::string set_name(std::uint32_t mask) const;
    std::uint32_t mask_of(const std::set<std::string>& elems) const;
    std::string delta_name(std::uint32_t src, std::uint32_t tgt,
                           std::uint32_t kept) const;
};

struct ScenarioSystem {
    CategoryRef category;
    SystemTables tables;
};

ScenarioSystem build_abc_system(const ScenarioConfig& cfg);
ScenarioSystem build_x_foot_system(const ScenarioConfig& cfg);
ScenarioSystem build_warehouse_system(const ScenarioConfig& cfg);
ScenarioSystem build_orders_foot_system(const ScenarioConfig& cfg);
ScenarioSystem build_logistics_system(const ScenarioConfig& cfg);

CategoryRef build_abc_category(const ScenarioConfig& cfg);
CategoryRef build_x_foot(const ScenarioConfig& cfg);
CategoryRef build_warehouse_category(const ScenarioConfig& cfg);
CategoryRef build_orders_foot(const ScenarioConfig& cfg);
CategoryRef build_logistics_category(const ScenarioConfig& cfg);

struct ScenarioModel {
    ScenarioConfig config;
    ScenarioSystem abc, x_foot, warehouse, orders_foot, logistics;
    AsymmetricLens abc_to_x;            // select frames at the warehouse
    AsymmetricLens warehouse_to_x;      // project the X stock, cascade on delete
    AsymmetricLens warehouse_to_orders; // expose catalogue pages and orders
    AsymmetricLens logistics_to_orders; // the logistics copy of the same data

    LensCospan frames_cospan() const { return {abc_to_x, warehouse_to_x}; }
    LensCospan orders_cospan() const { return {warehouse_to_orders, logistics_to_orders}; }
};

ScenarioModel build_scenario(const ScenarioConfig& cfg);

AsymmetricLens abc_to_x_lens(const ScenarioConfig& cfg);
AsymmetricLens warehouse_to_x_lens(const ScenarioConfig& cfg);
AsymmetricLens warehouse_to_orders_lens(const ScenarioConfig& cfg);
AsymmetricLens logistics_to_orders_lens(const ScenarioConfig& cfg);

/// The five-legged span over the whole chain, built by fusing the two
/// cospans as a zig-zag.  Feet, in order: ABC, X foot, Warehouse,
/// Orders foot, Logistics.
Multilens build_supply_chain_5lens(const ScenarioConfig& cfg);
Multilens build_supply_chain_5lens(const ScenarioModel& model);

struct CommandTrace {
    std::string cospan; // "frames" or "orders"
    PropagationTrace trace;
};

struct CommandResult {
    bool accepted = false;
    std::string rejection; // "rejected: ..." when not accepted
    std::vector<CommandTrace> traces;
};

/// A single-writer session over a synchronized world.  Commands form a
/// delta at the owning system, propagate it through both cospans, and
/// keep the tracked states synchronized; business-rule violations are
/// rejected before any delta is formed.
class ScenarioSession {
public:
    explicit ScenarioSession(ScenarioConfig cfg);
    explicit ScenarioSession(ScenarioModel model);

    const ScenarioModel& model() const { return model_; }
    const std::string& abc_state() const { return abc_state_; }
    const std::string& warehouse_state() const { return warehouse_state_; }
    const std::string& logistics_state() const { return logistics_state_; }

    bool synchronized() const;

    CommandResult add_frame(const std::string& frame, const std::string& location);
    CommandResult remove_frame(const std::string& frame);
    /// Warehouse intake/removal of Y or Z parts (frames arrive through
    /// ABC instead); catalogue changes propagate to logistics.
    CommandResult stock_part(const std::string& part);
    CommandResult remove_part(const std::string& part);
    CommandResult place_order(const std::string& x, const std::string& y,
                              const std::string& z);
    CommandResult cancel_order(const std::string& x, const std::string& y,
                               const std::string& z);
    /// The catalogue is read-only on the logistics side; this is always
    /// rejected with the half-duplex policy.
    CommandResult edit_catalogue_from_logistics(const std::string& detail);

    /// Runs one script line ("add-frame f1 XYZ-Warehouse", "place-order
    /// f1 y1 z1", ...).  Throws ParseError on unknown commands.
    CommandResult run_line(const std::string& line);

private:
    CommandResult propagate_from_abc(std::uint32_t tgt, std::uint32_t kept);
    CommandResult propagate_from_warehouse(std::uint32_t tgt, std::uint32_t kept);
    CommandResult propagate_from_logistics(std::uint32_t tgt, std::uint32_t kept);

    ScenarioModel model_;
    std::uint32_t abc_mask_ = 0, warehouse_mask_ = 0, logistics_mask_ = 0;
    std::string abc_state_, warehouse_state_, logistics_state_;
};

} // namespace lenscat
