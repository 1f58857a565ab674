#include "pinnlab/config.hpp"

#include <nlohmann/json.hpp>

#include <set>

namespace pinnlab {

using nlohmann::json;

namespace {

/// JSON cursor carrying the field path for error messages.
struct Cur {
    const json* node;
    std::string path;

    std::string at(const std::string& key) const { return path.empty() ? key : path + "." + key; }

    Cur child(const std::string& key) const {
        if (!node->is_object()) throw format_error(path + ": must be an object");
        auto it = node->find(key);
        if (it == node->end()) throw format_error(at(key) + ": missing required field");
        return {&*it, at(key)};
    }

    std::optional<Cur> maybe(const std::string& key) const {
        if (!node->is_object()) throw format_error(path + ": must be an object");
        auto it = node->find(key);
        if (it == node->end()) return std::nullopt;
        return Cur{&*it, at(key)};
    }

    void check_keys(std::initializer_list<const char*> allowed) const {
        if (!node->is_object()) throw format_error(path + ": must be an object");
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (auto it = node->begin(); it != node->end(); ++it)
            if (!ok.count(it.key()))
                throw format_error(at(it.key()) + ": unknown field");
    }

    double num() const {
        if (!node->is_number()) throw format_error(path + ": must be a number");
        return node->get<double>();
    }

    long integer() const {
        if (!node->is_number_integer()) throw format_error(path + ": must be an integer");
        return node->get<long>();
    }

    std::uint64_t uinteger() const {
        if (!node->is_number_unsigned() && !(node->is_number_integer() && node->get<long>() >= 0))
            throw format_error(path + ": must be a non-negative integer");
        return node->get<std::uint64_t>();
    }

    std::string str() const {
        if (!node->is_string()) throw format_error(path + ": must be a string");
        return node->get<std::string>();
    }

    bool boolean() const {
        if (!node->is_boolean()) throw format_error(path + ": must be a boolean");
        return node->get<bool>();
    }

    std::pair<double, double> range() const {
        if (!node->is_array() || node->size() != 2)
            throw format_error(path + ": must be a [lo, hi] pair");
        return {Cur{&(*node)[0], path + "[0]"}.num(), Cur{&(*node)[1], path + "[1]"}.num()};
    }
};

TargetField parse_target(const Cur& cur, char field) {
    if (cur.node->is_number()) return TargetField::constant(cur.num());
    if (cur.node->is_string()) {
        std::string s = cur.str();
        if (s == "tgv") {
            switch (field) {
                case 'u': return {TargetField::Kind::tgv_u, 0.0};
                case 'v': return {TargetField::Kind::tgv_v, 0.0};
                case 'p': return {TargetField::Kind::tgv_p, 0.0};
            }
        }
        throw format_error(cur.path + ": unknown target \"" + s + "\" (use a number or \"tgv\")");
    }
    throw format_error(cur.path + ": must be a number or \"tgv\"");
}

std::array<double, 2> default_normal(Segment segment, const Cur& where) {
    switch (segment) {
        case Segment::inlet: return {-1.0, 0.0};
        case Segment::outlet: return {1.0, 0.0};
        case Segment::top: return {0.0, 1.0};
        case Segment::bottom: return {0.0, -1.0};
        default:
            throw format_error(where.path +
                               ": flux conditions need an explicit normal on this segment");
    }
}

ConditionSpec parse_boundary_condition(const Cur& cur, Segment segment) {
    cur.check_keys({"kind", "u", "v", "speed", "normal"});
    ConditionSpec spec;
    std::string kind = cur.child("kind").str();
    if (kind == "dirichlet") spec.kind = ConditionKind::dirichlet;
    else if (kind == "neumann") spec.kind = ConditionKind::neumann;
    else if (kind == "convective") spec.kind = ConditionKind::convective;
    else throw format_error(cur.at("kind") + ": must be dirichlet, neumann, or convective");

    if (spec.kind == ConditionKind::convective) {
        spec.convection_speed = cur.maybe("speed") ? cur.child("speed").num() : 1.0;
    } else {
        spec.u = parse_target(cur.child("u"), 'u');
        spec.v = parse_target(cur.child("v"), 'v');
    }
    if (spec.kind != ConditionKind::dirichlet) {
        if (auto n = cur.maybe("normal")) {
            auto [nx, ny] = n->range();
            spec.normal = {nx, ny};
        } else {
            spec.normal = default_normal(segment, cur);
        }
    }
    return spec;
}

void parse_conditions(const Cur& cur, TrainConfig& train) {
    cur.check_keys({"boundaries", "initial", "pressure_pin"});

    Cur boundaries = cur.child("boundaries");
    if (boundaries.node->is_string()) {
        if (boundaries.str() != "tgv")
            throw format_error(boundaries.path + ": the only shorthand is \"tgv\"");
        ConditionSpec tgv;
        tgv.kind = ConditionKind::dirichlet;
        tgv.u = {TargetField::Kind::tgv_u, 0.0};
        tgv.v = {TargetField::Kind::tgv_v, 0.0};
        for (Segment s : {Segment::inlet, Segment::outlet, Segment::top, Segment::bottom})
            train.conditions.boundary[s] = tgv;
    } else {
        boundaries.check_keys({"inlet", "outlet", "top", "bottom", "cylinder"});
        for (auto it = boundaries.node->begin(); it != boundaries.node->end(); ++it) {
            Segment segment = parse_segment(it.key());
            train.conditions.boundary[segment] =
                parse_boundary_condition({&*it, boundaries.at(it.key())}, segment);
        }
    }

    if (auto initial = cur.maybe("initial")) {
        ConditionSpec spec;
        spec.kind = ConditionKind::initial;
        if (initial->node->is_string()) {
            if (initial->str() != "tgv")
                throw format_error(initial->path + ": the only shorthand is \"tgv\"");
            spec.u = {TargetField::Kind::tgv_u, 0.0};
            spec.v = {TargetField::Kind::tgv_v, 0.0};
            spec.p = {TargetField::Kind::tgv_p, 0.0};
        } else {
            initial->check_keys({"u", "v", "p"});
            spec.u = parse_target(initial->child("u"), 'u');
            spec.v = parse_target(initial->child("v"), 'v');
            if (auto p = initial->maybe("p")) spec.p = parse_target(*p, 'p');
        }
        train.conditions.initial = spec;
    }

    if (auto pin = cur.maybe("pressure_pin")) {
        pin->check_keys({"x", "y", "t", "value"});
        GaugePin gauge;
        gauge.point.x = pin->child("x").num();
        gauge.point.y = pin->child("y").num();
        if (auto t = pin->maybe("t")) gauge.point.t = t->num();
        gauge.pressure = pin->maybe("value") ? pin->child("value").num() : 0.0;
        train.conditions.pressure_pin = gauge;
    }
}

} // namespace

RunConfig parse_run_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw format_error("config parse error at byte " + std::to_string(e.byte) + ": " +
                           e.what());
    }
    Cur root{&doc, ""};
    root.check_keys({"variant", "domain", "fluid", "network", "precision", "sampler", "optimizer",
                     "schedule", "training", "conditions", "data", "output", "weights"});

    RunConfig config;
    config.raw = text;
    TrainConfig& train = config.train;

    train.variant = parse_variant(root.child("variant").str());

    {
        Cur domain = root.child("domain");
        domain.check_keys({"x", "y", "time", "cylinder"});
        auto [x0, x1] = domain.child("x").range();
        auto [y0, y1] = domain.child("y").range();
        train.domain.x_min = x0;
        train.domain.x_max = x1;
        train.domain.y_min = y0;
        train.domain.y_max = y1;
        if (auto t = domain.maybe("time")) train.domain.time_span = t->num();
        if (auto cyl = domain.maybe("cylinder")) {
            cyl->check_keys({"center", "radius"});
            auto [cx, cy] = cyl->child("center").range();
            train.domain.hole = Cylinder{cx, cy, cyl->child("radius").num()};
        }
        try {
            train.domain.validate();
        } catch (const contract_error& e) {
            throw format_error(std::string("domain: ") + e.what());
        }
        if (train.variant == Variant::steady && !train.domain.steady())
            throw format_error("domain.time: steady variant must not declare a time span");
        if (train.variant != Variant::steady && train.domain.steady())
            throw format_error("domain.time: required for unsteady and data-driven variants");
    }

    {
        Cur fluid = root.child("fluid");
        fluid.check_keys({"nu", "rho"});
        train.fluid.nu = fluid.child("nu").num();
        train.fluid.rho = fluid.child("rho").num();
        if (train.fluid.nu <= 0.0) throw format_error("fluid.nu: must be positive");
        if (train.fluid.rho <= 0.0) throw format_error("fluid.rho: must be positive");
    }

    {
        Cur network = root.child("network");
        network.check_keys({"hidden_layers", "neurons", "activation", "seed",
                            "literal_output_activation"});
        train.network.hidden_layers = static_cast<int>(network.child("hidden_layers").integer());
        train.network.neurons = static_cast<int>(network.child("neurons").integer());
        if (train.network.hidden_layers < 1)
            throw format_error("network.hidden_layers: must be >= 1");
        if (train.network.neurons < 1) throw format_error("network.neurons: must be >= 1");
        train.network.activation = parse_activation(network.child("activation").str());
        if (auto seed = network.maybe("seed")) train.network.seed = seed->uinteger();
        if (auto literal = network.maybe("literal_output_activation"))
            train.network.literal_output_activation = literal->boolean();
    }

    if (auto precision = root.maybe("precision"))
        train.precision = parse_precision(static_cast<int>(precision->integer()));

    {
        Cur sampler = root.child("sampler");
        sampler.check_keys({"interior_pool", "boundary_pool", "initial_pool", "interior_batch",
                            "boundary_batch", "initial_batch", "data_batch", "scale", "seed"});
        SamplerSpec& s = train.sampler;
        s.interior_pool = static_cast<std::size_t>(sampler.child("interior_pool").integer());
        s.boundary_pool = static_cast<std::size_t>(sampler.child("boundary_pool").integer());
        if (auto p = sampler.maybe("initial_pool"))
            s.initial_pool = static_cast<std::size_t>(p->integer());
        s.interior_batch = static_cast<std::size_t>(sampler.child("interior_batch").integer());
        s.boundary_batch = static_cast<std::size_t>(sampler.child("boundary_batch").integer());
        if (auto b = sampler.maybe("initial_batch"))
            s.initial_batch = static_cast<std::size_t>(b->integer());
        if (auto b = sampler.maybe("data_batch"))
            s.data_batch = static_cast<std::size_t>(b->integer());
        if (auto sc = sampler.maybe("scale")) s.scale = sc->num();
        if (s.scale <= 0.0) throw format_error("sampler.scale: must be positive");
        if (auto seed = sampler.maybe("seed")) s.seed = seed->uinteger();
    }

    if (auto optimizer = root.maybe("optimizer")) {
        optimizer->check_keys({"beta1", "beta2", "eps"});
        train.adam.beta1 = optimizer->child("beta1").num();
        train.adam.beta2 = optimizer->child("beta2").num();
        train.adam.eps = optimizer->child("eps").num();
    }

    {
        Cur schedule = root.child("schedule");
        schedule.check_keys(
            {"kind", "eta0", "gamma", "gamma_base", "gamma_period", "eta_low", "eta_high", "n_c"});
        std::string kind = schedule.child("kind").str();
        try {
            if (kind == "exponential") {
                double eta0 = schedule.child("eta0").num();
                if (auto base = schedule.maybe("gamma_base")) {
                    double period = schedule.child("gamma_period").num();
                    train.schedule = LrSchedule::exponential_base(eta0, base->num(), period);
                } else {
                    train.schedule = LrSchedule::exponential(eta0, schedule.child("gamma").num());
                }
            } else if (kind == "cyclical") {
                train.schedule = LrSchedule::cyclical(
                    schedule.child("eta_low").num(), schedule.child("eta_high").num(),
                    schedule.child("n_c").integer(), schedule.child("gamma").num());
            } else {
                throw format_error("schedule.kind: must be exponential or cyclical");
            }
        } catch (const contract_error& e) {
            throw format_error(std::string("schedule: ") + e.what());
        }
    }

    {
        Cur training = root.child("training");
        training.check_keys(
            {"iterations", "log_every", "checkpoint_every", "shuffle_seed", "threads", "timing"});
        train.iterations = training.child("iterations").integer();
        if (train.iterations < 0) throw format_error("training.iterations: must be >= 0");
        if (auto v = training.maybe("log_every")) train.log_every = v->integer();
        if (train.log_every < 1) throw format_error("training.log_every: must be >= 1");
        if (auto v = training.maybe("checkpoint_every")) train.checkpoint_every = v->integer();
        if (auto v = training.maybe("shuffle_seed")) train.shuffle_seed = v->uinteger();
        if (auto v = training.maybe("threads")) train.threads = static_cast<int>(v->integer());
        if (auto v = training.maybe("timing")) train.timing = v->boolean();
    }

    parse_conditions(root.child("conditions"), train);

    if (auto data = root.maybe("data")) {
        data->check_keys({"snapshot_dir", "window"});
        DataSpec spec;
        spec.snapshot_dir = data->child("snapshot_dir").str();
        auto [lo, hi] = data->child("window").range();
        spec.t_begin = lo;
        spec.t_end = hi;
        train.data = spec;
    }
    if (train.variant == Variant::data_driven) {
        if (!train.data) throw format_error("data: required for the data-driven variant");
        if (train.data->t_begin < 0.0 || train.data->t_end > *train.domain.time_span ||
            train.data->t_begin >= train.data->t_end)
            throw format_error("data.window: must be a non-empty range inside [0, domain.time]");
        if (train.sampler.data_batch < 1)
            throw format_error("sampler.data_batch: required for the data-driven variant");
    }

    if (auto weights = root.maybe("weights")) {
        if (!weights->node->is_array() || weights->node->size() != loss_term_count)
            throw format_error("weights: must be an array of 10 numbers");
        for (int t = 0; t < loss_term_count; ++t)
            train.weights[t] = Cur{&(*weights->node)[t], "weights[" + std::to_string(t) + "]"}.num();
    }

    if (auto output = root.maybe("output")) config.output = output->str();
    return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    return parse_run_config(read_file(path));
}

// ---------------------------------------------------------------------------
// Bundled presets
// ---------------------------------------------------------------------------

namespace {

// Desk-scale decaying-vortex verification: pool sizes keep the "each point
// seen 40 times" ratio at 20000 iterations.
const char* tgv_desk_json = R"json({
  "variant": "unsteady",
  "domain": {"x": [-3.141592653589793, 3.141592653589793],
             "y": [-3.141592653589793, 3.141592653589793],
             "time": 2.0},
  "fluid": {"nu": 0.01, "rho": 1.0},
  "network": {"hidden_layers": 3, "neurons": 64, "activation": "silu", "seed": 42},
  "precision": 64,
  "sampler": {"interior_pool": 1024000, "boundary_pool": 256000, "initial_pool": 256000,
              "interior_batch": 2048, "boundary_batch": 512, "initial_batch": 512,
              "scale": 1.0, "seed": 7},
  "optimizer": {"beta1": 0.9, "beta2": 0.999, "eps": 1e-8},
  "schedule": {"kind": "cyclical", "eta_low": 1.5e-5, "eta_high": 1.5e-3, "n_c": 5000,
               "gamma": 0.999989},
  "training": {"iterations": 20000, "log_every": 100, "checkpoint_every": 0, "shuffle_seed": 3},
  "conditions": {"boundaries": "tgv", "initial": "tgv"},
  "output": "out/tgv-desk"
})json";

// Full-scale decaying vortex (Re = 100 over t in [0, 100]).
const char* tgv_full_json = R"json({
  "variant": "unsteady",
  "domain": {"x": [-3.141592653589793, 3.141592653589793],
             "y": [-3.141592653589793, 3.141592653589793],
             "time": 100.0},
  "fluid": {"nu": 0.01, "rho": 1.0},
  "network": {"hidden_layers": 3, "neurons": 128, "activation": "silu", "seed": 42},
  "precision": 32,
  "sampler": {"interior_pool": 81920000, "boundary_pool": 81920000, "initial_pool": 81920000,
              "interior_batch": 8192, "boundary_batch": 8192, "initial_batch": 8192,
              "scale": 1.0, "seed": 7},
  "optimizer": {"beta1": 0.9, "beta2": 0.999, "eps": 1e-8},
  "schedule": {"kind": "cyclical", "eta_low": 1.5e-5, "eta_high": 1.5e-3, "n_c": 5000,
               "gamma": 0.999989},
  "training": {"iterations": 400000, "log_every": 1000, "checkpoint_every": 50000,
               "shuffle_seed": 3},
  "conditions": {"boundaries": "tgv", "initial": "tgv"},
  "output": "out/tgv"
})json";

const char* re40_json = R"json({
  "variant": "unsteady",
  "domain": {"x": [-10.0, 30.0], "y": [-10.0, 10.0], "time": 20.0,
             "cylinder": {"center": [0.0, 0.0], "radius": 0.5}},
  "fluid": {"nu": 0.025, "rho": 1.0},
  "network": {"hidden_layers": 6, "neurons": 512, "activation": "silu", "seed": 42},
  "precision": 32,
  "sampler": {"interior_pool": 256000000, "boundary_pool": 25600000, "initial_pool": 25600000,
              "interior_batch": 25600, "boundary_batch": 2560, "initial_batch": 2560,
              "scale": 1.0, "seed": 7},
  "optimizer": {"beta1": 0.9, "beta2": 0.999, "eps": 1e-8},
  "schedule": {"kind": "cyclical", "eta_low": 1e-6, "eta_high": 1e-2, "n_c": 5000,
               "gamma": 0.99998},
  "training": {"iterations": 400000, "log_every": 1000, "checkpoint_every": 50000,
               "shuffle_seed": 3},
  "conditions": {
    "boundaries": {
      "inlet": {"kind": "dirichlet", "u": 1.0, "v": 0.0},
      "top": {"kind": "dirichlet", "u": 1.0, "v": 0.0},
      "bottom": {"kind": "dirichlet", "u": 1.0, "v": 0.0},
      "cylinder": {"kind": "dirichlet", "u": 0.0, "v": 0.0},
      "outlet": {"kind": "convective", "speed": 1.0}
    },
    "initial": {"u": 1.0, "v": 0.0}
  },
  "output": "out/re40"
})json";

const char* re40_steady_json = R"json({
  "variant": "steady",
  "domain": {"x": [-10.0, 30.0], "y": [-10.0, 10.0],
             "cylinder": {"center": [0.0, 0.0], "radius": 0.5}},
  "fluid": {"nu": 0.025, "rho": 1.0},
  "network": {"hidden_layers": 6, "neurons": 512, "activation": "silu", "seed": 42},
  "precision": 32,
  "sampler": {"interior_pool": 256000000, "boundary_pool": 25600000,
              "interior_batch": 25600, "boundary_batch": 2560,
              "scale": 1.0, "seed": 7},
  "optimizer": {"beta1": 0.9, "beta2": 0.999, "eps": 1e-8},
  "schedule": {"kind": "cyclical", "eta_low": 1e-6, "eta_high": 1e-2, "n_c": 5000,
               "gamma": 0.99998},
  "training": {"iterations": 400000, "log_every": 1000, "checkpoint_every": 50000,
               "shuffle_seed": 3},
  "conditions": {
    "boundaries": {
      "inlet": {"kind": "dirichlet", "u": 1.0, "v": 0.0},
      "top": {"kind": "dirichlet", "u": 1.0, "v": 0.0},
      "bottom": {"kind": "dirichlet", "u": 1.0, "v": 0.0},
      "cylinder": {"kind": "dirichlet", "u": 0.0, "v": 0.0},
      "outlet": {"kind": "convective", "speed": 1.0}
    }
  },
  "output": "out/re40-steady"
})json";

const char* re200_json = R"json({
  "variant": "unsteady",
  "domain": {"x": [-8.0, 25.0], "y": [-8.0, 8.0], "time": 200.0,
             "cylinder": {"center": [0.0, 0.0], "radius": 0.5}},
  "fluid": {"nu": 0.005, "rho": 1.0},
  "network": {"hidden_layers": 6, "neurons": 512, "activation": "silu", "seed": 42},
  "precision": 32,
  "sampler": {"interior_pool": 256000000, "boundary_pool": 25600000, "initial_pool": 25600000,
              "interior_batch": 25600, "boundary_batch": 2560, "initial_batch": 2560,
              "scale": 1.0, "seed": 7},
  "optimizer": {"beta1": 0.9, "beta2": 0.999, "eps": 1e-8},
  "schedule": {"kind": "cyclical", "eta_low": 1e-6, "eta_high": 1e-2, "n_c": 5000,
               "gamma": 0.9999915},
  "training": {"iterations": 1000000, "log_every": 1000, "checkpoint_every": 100000,
               "shuffle_seed": 3},
  "conditions": {
    "boundaries": {
      "inlet": {"kind": "dirichlet", "u": 1.0, "v": 0.0},
      "top": {"kind": "dirichlet", "u": 1.0, "v": 0.0},
      "bottom": {"kind": "dirichlet", "u": 1.0, "v": 0.0},
      "cylinder": {"kind": "dirichlet", "u": 0.0, "v": 0.0},
      "outlet": {"kind": "convective", "speed": 1.0}
    },
    "initial": {"u": 1.0, "v": 0.0}
  },
  "output": "out/re200"
})json";

const char* re200_steady_json = R"json({
  "variant": "steady",
  "domain": {"x": [-8.0, 25.0], "y": [-8.0, 8.0],
             "cylinder": {"center": [0.0, 0.0], "radius": 0.5}},
  "fluid": {"nu": 0.005, "rho": 1.0},
  "network": {"hidden_layers": 6, "neurons": 512, "activation": "silu", "seed": 42},
  "precision": 32,
  "sampler": {"interior_pool": 256000000, "boundary_pool": 25600000,
              "interior_batch": 25600, "boundary_batch": 2560,
              "scale": 1.0, "seed": 7},
  "optimizer": {"beta1": 0.9, "beta2": 0.999, "eps": 1e-8},
  "schedule": {"kind": "cyclical", "eta_low": 1e-6, "eta_high": 1e-2, "n_c": 5000,
               "gamma": 0.9999915},
  "training": {"iterations": 1000000, "log_every": 1000, "checkpoint_every": 100000,
               "shuffle_seed": 3},
  "conditions": {
    "boundaries": {
      "inlet": {"kind": "dirichlet", "u": 1.0, "v": 0.0},
      "top": {"kind": "dirichlet", "u": 1.0, "v": 0.0},
      "bottom": {"kind": "dirichlet", "u": 1.0, "v": 0.0},
      "cylinder": {"kind": "dirichlet", "u": 0.0, "v": 0.0},
      "outlet": {"kind": "convective", "speed": 1.0}
    }
  },
  "output": "out/re200-steady"
})json";

// Data-driven variant: the misfit terms are fed from snapshots inside the
// window and PDE/BC points are drawn only for t >= window start.
const char* re200_data_json = R"json({
  "variant": "data-driven",
  "domain": {"x": [-8.0, 25.0], "y": [-8.0, 8.0], "time": 200.0,
             "cylinder": {"center": [0.0, 0.0], "radius": 0.5}},
  "fluid": {"nu": 0.005, "rho": 1.0},
  "network": {"hidden_layers": 6, "neurons": 512, "activation": "silu", "seed": 42},
  "precision": 32,
  "sampler": {"interior_pool": 256000000, "boundary_pool": 25600000,
              "interior_batch": 25600, "boundary_batch": 2560, "data_batch": 6400,
              "scale": 1.0, "seed": 7},
  "optimizer": {"beta1": 0.9, "beta2": 0.999, "eps": 1e-8},
  "schedule": {"kind": "cyclical", "eta_low": 1e-6, "eta_high": 1e-2, "n_c": 5000,
               "gamma": 0.9999915},
  "training": {"iterations": 1000000, "log_every": 1000, "checkpoint_every": 100000,
               "shuffle_seed": 3},
  "conditions": {
    "boundaries": {
      "inlet": {"kind": "dirichlet", "u": 1.0, "v": 0.0},
      "top": {"kind": "dirichlet", "u": 1.0, "v": 0.0},
      "bottom": {"kind": "dirichlet", "u": 1.0, "v": 0.0},
      "cylinder": {"kind": "dirichlet", "u": 0.0, "v": 0.0},
      "outlet": {"kind": "convective", "speed": 1.0}
    }
  },
  "data": {"snapshot_dir": "snapshots", "window": [125.0, 140.0]},
  "output": "out/re200-data"
})json";

} // namespace

const std::map<std::string, std::string>& config_presets() {
    static const std::map<std::string, std::string> presets = {
        {"tgv-desk", tgv_desk_json},   {"tgv", tgv_full_json},
        {"re40", re40_json},           {"re40-steady", re40_steady_json},
        {"re200", re200_json},         {"re200-steady", re200_steady_json},
        {"re200-data", re200_data_json},
    };
    return presets;
}

RunConfig preset_run_config(const std::string& name) {
    auto it = config_presets().find(name);
    if (it == config_presets().end()) {
        std::string names;
        for (const auto& [key, value] : config_presets()) {
            (void)value;
            if (!names.empty()) names += ", ";
            names += key;
        }
        throw contract_error("unknown preset \"" + name + "\" (available: " + names + ")");
    }
    return parse_run_config(it->second);
}

} // namespace pinnlab
