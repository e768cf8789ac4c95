#include "ctraj/io.hpp"
#include "ctraj/log.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ctraj {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_double(const std::string& s, int line_no, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        if (!std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": cannot parse " + what + " '" + s + "'");
    }
}

std::string format_time(double t) {
    std::ostringstream ss;
    ss.precision(17);
    ss << t;
    return ss.str();
}

} // namespace

TrajectorySet parse_trajectories_csv(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;

    if (!std::getline(in, line)) throw std::runtime_error(origin + ": empty file");
    ++line_no;
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "entity_id" || header[1] != "t")
        throw std::runtime_error(origin + ": line 1: header must be entity_id,t,x1[,x2,...]");
    const int dim = static_cast<int>(header.size()) - 2;

    struct Row {
        int line_no;
        std::vector<double> coords;
    };
    std::vector<std::string> entity_order;
    std::map<std::string, std::map<double, Row>> rows;
    std::vector<double> all_times;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != dim + 2)
            throw std::runtime_error(origin + ": line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(dim + 2) + " fields, got " + std::to_string(fields.size()));
        const std::string& id = fields[0];
        const double t = parse_double(fields[1], line_no, "time");
        Row row{line_no, {}};
        for (int j = 0; j < dim; ++j)
            row.coords.push_back(parse_double(fields[static_cast<std::size_t>(j) + 2], line_no, "coordinate"));
        auto [it, inserted] = rows.try_emplace(id);
        if (inserted) entity_order.push_back(id);
        auto [rit, fresh] = it->second.emplace(t, std::move(row));
        if (!fresh)
            throw std::runtime_error(origin + ": line " + std::to_string(line_no) + ": duplicate sample for entity '" +
                                     id + "' at t=" + format_time(t) + " (first on line " +
                                     std::to_string(rit->second.line_no) + ")");
        all_times.push_back(t);
    }
    if (entity_order.empty()) throw std::runtime_error(origin + ": no data rows");

    std::sort(all_times.begin(), all_times.end());
    all_times.erase(std::unique(all_times.begin(), all_times.end()), all_times.end());

    std::vector<Trajectory> trajs;
    for (const auto& id : entity_order) {
        const auto& samples = rows[id];
        Trajectory tr;
        tr.name = id;
        tr.dim = dim;
        for (double t : all_times) {
            auto it = samples.find(t);
            if (it == samples.end())
                throw std::runtime_error(origin + ": entity '" + id + "' is missing a sample at t=" +
                                         format_time(t) + " (timestamps must match across entities exactly)");
            tr.coords.insert(tr.coords.end(), it->second.coords.begin(), it->second.coords.end());
        }
        trajs.push_back(std::move(tr));
    }
    try {
        return TrajectorySet(TimeGrid(all_times), std::move(trajs));
    } catch (const std::exception& e) {
        throw std::runtime_error(origin + ": " + e.what());
    }
}

TrajectorySet parse_trajectories_json(const std::string& text, const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw std::runtime_error(origin + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("times") || !doc.contains("entities"))
        throw std::runtime_error(origin + ": expected an object with 'times' and 'entities'");

    std::vector<double> times;
    for (const auto& t : doc["times"]) {
        if (!t.is_number()) throw std::runtime_error(origin + ": 'times' must hold numbers");
        times.push_back(t.get<double>());
    }
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::runtime_error(origin + ": 'times' must be strictly increasing (index " + std::to_string(i) + ")");

    std::vector<Trajectory> trajs;
    int dim = -1;
    for (const auto& ent : doc["entities"]) {
        if (!ent.contains("id") || !ent.contains("points"))
            throw std::runtime_error(origin + ": every entity needs 'id' and 'points'");
        Trajectory tr;
        tr.name = ent["id"].is_string() ? ent["id"].get<std::string>() : ent["id"].dump();
        const auto& pts = ent["points"];
        if (pts.size() != times.size())
            throw std::runtime_error(origin + ": entity '" + tr.name + "' has " + std::to_string(pts.size()) +
                                     " points for " + std::to_string(times.size()) + " times");
        for (const auto& p : pts) {
            if (!p.is_array()) throw std::runtime_error(origin + ": points must be coordinate arrays");
            if (dim == -1) dim = static_cast<int>(p.size());
            if (static_cast<int>(p.size()) != dim)
                throw std::runtime_error(origin + ": entity '" + tr.name + "' has ragged point dimensions");
            for (const auto& c : p) tr.coords.push_back(c.get<double>());
        }
        tr.dim = dim;
        trajs.push_back(std::move(tr));
    }
    try {
        return TrajectorySet(TimeGrid(std::move(times)), std::move(trajs));
    } catch (const std::exception& e) {
        throw std::runtime_error(origin + ": " + e.what());
    }
}

TrajectorySet load_trajectories(const std::string& path, InputFormat format) {
    const std::string text = read_file(path);
    return format == InputFormat::csv ? parse_trajectories_csv(text, path) : parse_trajectories_json(text, path);
}

std::string trajectories_to_json(const TrajectorySet& set) {
    ordered_json doc;
    doc["times"] = set.grid().times();
    doc["entities"] = ordered_json::array();
    for (const auto& tr : set.trajectories()) {
        ordered_json ent;
        ent["id"] = tr.name;
        ordered_json pts = ordered_json::array();
        for (std::size_t k = 0; k < tr.vertex_count(); ++k) {
            const auto v = tr.vertex(k);
            pts.push_back(std::vector<double>(v.begin(), v.end()));
        }
        ent["points"] = std::move(pts);
        doc["entities"].push_back(std::move(ent));
    }
    return doc.dump(2) + "\n";
}

std::string trajectories_to_csv(const TrajectorySet& set) {
    std::ostringstream out;
    out.precision(17);
    out << "entity_id,t";
    for (int j = 0; j < set.dim(); ++j) out << ",x" << (j + 1);
    out << "\n";
    for (const auto& tr : set.trajectories()) {
        for (std::size_t k = 0; k < tr.vertex_count(); ++k) {
            out << tr.name << "," << set.grid().times()[k];
            for (double c : tr.vertex(k)) out << "," << c;
            out << "\n";
        }
    }
    return out.str();
}

void save_trajectories(const TrajectorySet& set, const std::string& path, InputFormat format) {
    write_file(path, format == InputFormat::json ? trajectories_to_json(set) : trajectories_to_csv(set));
}

namespace {

ordered_json stats_object(const SolveStats& stats, std::optional<double> oracle_cost,
                          std::optional<double> solver_cost) {
    ordered_json s;
    s["reeb_vertices"] = stats.reeb_vertices;
    s["reeb_edges"] = stats.reeb_edges;
    s["envelope_pieces"] = stats.envelope_pieces;
    if (stats.type2_breakpoints) s["type2_breakpoints"] = *stats.type2_breakpoints;
    s["vertex_count"] = stats.vertex_count;
    if (stats.elementary_intervals) s["elementary_intervals"] = *stats.elementary_intervals;
    if (stats.max_type2_per_elementary) s["max_type2_per_elementary"] = *stats.max_type2_per_elementary;
    if (stats.max_vertices_per_elementary) s["max_vertices_per_elementary"] = *stats.max_vertices_per_elementary;
    if (oracle_cost) {
        s["oracle_cost"] = *oracle_cost;
        if (solver_cost) s["oracle_gap"] = std::abs(*solver_cost - *oracle_cost);
    }
    return s;
}

} // namespace

std::string result_to_json(const TrajectorySet& set, const CentralTrajectory& ct, const SolveStats& stats,
                           std::optional<double> oracle_cost) {
    ordered_json doc;
    doc["cost"] = ct.cost;
    if (ct.cost_reduced) doc["cost_dprime"] = *ct.cost_reduced;
    doc["pieces"] = ordered_json::array();
    for (const auto& p : ct.pieces) {
        ordered_json jp;
        jp["t0"] = p.span.lo;
        jp["t1"] = p.span.hi;
        jp["entity"] = set.trajectory(p.entity).name;
        doc["pieces"].push_back(std::move(jp));
    }
    doc["jumps"] = ordered_json::array();
    for (const auto& j : ct.jumps) {
        ordered_json jj;
        jj["t"] = j.t;
        jj["from"] = set.trajectory(j.from).name;
        jj["to"] = set.trajectory(j.to).name;
        jj["gap"] = j.gap;
        ordered_json chain = ordered_json::array();
        for (EntityId e : j.chain) chain.push_back(set.trajectory(e).name);
        jj["chain"] = std::move(chain);
        doc["jumps"].push_back(std::move(jj));
    }
    doc["stats"] = stats_object(stats, oracle_cost, ct.cost);
    return doc.dump(2) + "\n";
}

std::string stats_to_json(const SolveStats& stats, std::optional<double> oracle_cost,
                          std::optional<double> solver_cost) {
    return stats_object(stats, oracle_cost, solver_cost).dump(2) + "\n";
}

std::string stats_to_text(const SolveStats& stats, std::optional<double> oracle_cost,
                          std::optional<double> solver_cost) {
    std::ostringstream out;
    out.precision(12);
    out << "reeb vertices        " << stats.reeb_vertices << "\n";
    out << "reeb edges           " << stats.reeb_edges << "\n";
    out << "envelope pieces      " << stats.envelope_pieces << "\n";
    out << "output vertices      " << stats.vertex_count << "\n";
    if (stats.elementary_intervals) out << "elementary intervals " << *stats.elementary_intervals << "\n";
    if (stats.type2_breakpoints) out << "type2 breakpoints    " << *stats.type2_breakpoints << "\n";
    if (stats.max_type2_per_elementary)
        out << "type2 per elem max   " << *stats.max_type2_per_elementary << "\n";
    if (stats.max_vertices_per_elementary)
        out << "vertices per elem max " << *stats.max_vertices_per_elementary << "\n";
    if (oracle_cost) {
        out << "oracle cost          " << *oracle_cost << "\n";
        if (solver_cost) out << "oracle gap           " << std::abs(*solver_cost - *oracle_cost) << "\n";
    }
    return out.str();
}

namespace {

TrajectorySet instance_from_generator(const std::string& spec, double epsilon, std::uint64_t seed) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "zigzag") {
        const int m = std::stoi(args);
        return zigzag_adversary(m, epsilon > 0.0 ? epsilon : 0.25);
    }
    if (kind == "random") {
        int vals[3] = {0, 0, 0};
        std::istringstream ss(args);
        std::string tok;
        int i = 0;
        while (std::getline(ss, tok, ',') && i < 3) vals[i++] = std::stoi(tok);
        if (i != 3) throw std::runtime_error("generator 'random' needs n,tau,d");
        return random_instance(vals[0], vals[1], vals[2], seed);
    }
    throw std::runtime_error("unknown generator '" + kind + "' (use zigzag:m or random:n,tau,d)");
}

InputFormat sniff_format(const std::string& path) {
    const auto dot = path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "json") return InputFormat::json;
    if (ext == "csv") return InputFormat::csv;
    throw std::runtime_error("cannot infer format of '" + path + "'; pass --format");
}

} // namespace

int run(const RunConfig& config) {
    try {
        TrajectorySet set = [&] {
            if (!config.generator.empty())
                return instance_from_generator(config.generator, config.epsilon, config.seed);
            if (config.input_path.empty()) throw std::runtime_error("no input file and no generator given");
            const InputFormat fmt = config.format ? *config.format : sniff_format(config.input_path);
            return load_trajectories(config.input_path, fmt);
        }();

        if (!config.saved_input_path.empty()) {
            InputFormat fmt = InputFormat::json;
            try {
                fmt = sniff_format(config.saved_input_path);
            } catch (const std::exception&) {
            }
            save_trajectories(set, config.saved_input_path, fmt);
        }

        if (config.expect_dim && set.dim() != *config.expect_dim)
            throw std::runtime_error("input dimension " + std::to_string(set.dim()) +
                                     " does not match --dim " + std::to_string(*config.expect_dim));

        SolveMode mode = config.mode;
        const bool plain_objective =
            config.measure == CentralityMeasure::farthest && config.aggregation == Aggregation::integral;
        if (mode == SolveMode::automatic) mode = (set.dim() == 1 && plain_objective) ? SolveMode::oned : SolveMode::general;
        if ((mode == SolveMode::oned || mode == SolveMode::oned_continuous) && set.dim() != 1)
            throw std::runtime_error("modes oned/oned_continuous need one-dimensional input");
        if (mode == SolveMode::oned && !plain_objective)
            throw std::runtime_error("mode oned only supports measure=farthest, agg=integral; use mode general");

        double epsilon = config.epsilon;
        if (epsilon < 0.0) throw std::runtime_error("epsilon must be nonnegative");
        if (mode == SolveMode::oned_continuous && epsilon != 0.0) {
            log::warn("oned_continuous forces epsilon = 0 (requested " + std::to_string(epsilon) + ")");
            epsilon = 0.0;
        }

        RunOutcome outcome;
        switch (mode) {
            case SolveMode::oned: {
                auto res = central_1d(set, epsilon);
                outcome.trajectory = std::move(res.trajectory);
                outcome.stats = res.stats;
                if (!config.reeb_dump_path.empty()) write_file(config.reeb_dump_path, describe(res.graph));
                break;
            }
            case SolveMode::oned_continuous: {
                auto res = central_1d_continuous(set);
                outcome.trajectory = std::move(res.trajectory);
                outcome.stats = res.stats;
                if (!config.reeb_dump_path.empty())
                    log::warn("--dump-reeb is not available in oned_continuous mode (no Reeb graph is built)");
                break;
            }
            default: {
                auto res = central_rd(set, epsilon, config.measure, config.aggregation);
                outcome.trajectory = std::move(res.trajectory);
                outcome.stats = res.stats;
                if (!config.reeb_dump_path.empty()) write_file(config.reeb_dump_path, describe(res.graph));
                break;
            }
        }

        if (config.oracle_check) {
            OracleConfig ocfg;
            ocfg.samples = config.oracle_samples;
            ocfg.measure = config.measure;
            ocfg.objective = config.aggregation;
            outcome.oracle_cost = oracle_cost(set, epsilon, ocfg).cost;
        }

        outcome.result_json = result_to_json(set, outcome.trajectory, outcome.stats, outcome.oracle_cost);
        if (config.result_path.empty())
            std::cout << outcome.result_json;
        else
            write_file(config.result_path, outcome.result_json);

        if (!config.svg_path.empty()) write_file(config.svg_path, render_svg(set, outcome.trajectory));

        if (!config.stats_path.empty()) {
            outcome.stats_json = stats_to_json(outcome.stats, outcome.oracle_cost, outcome.trajectory.cost);
            write_file(config.stats_path, outcome.stats_json);
        }
        if (!config.result_path.empty())
            std::cout << stats_to_text(outcome.stats, outcome.oracle_cost, outcome.trajectory.cost);
        return 0;
    } catch (const std::exception& e) {
        ordered_json err;
        err["error"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    }
}

} // namespace ctraj
