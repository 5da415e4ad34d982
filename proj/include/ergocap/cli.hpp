#pragma once

/// Input parsing, command dispatch and report rendering for the `ergocap`
/// tool. Kept in a header so the tests can drive commands without a process.

#include "ergocap/birkhoff.hpp"
#include "ergocap/capacity.hpp"
#include "ergocap/fec.hpp"
#include "ergocap/koopman.hpp"
#include "ergocap/measure.hpp"
#include "ergocap/noninvariant.hpp"
#include "ergocap/oracle.hpp"
#include "ergocap/random_systems.hpp"
#include "ergocap/space.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ergocap::cli {

using Json = nlohmann::ordered_json;

struct SystemDescription {
    std::size_t omega_size = 0;
    Transformation map = Transformation::identity(1);
    std::vector<Prob> generators;    ///< may be empty when only `probability` is given
    std::optional<Prob> probability;
};

// ---------------------------------------------------------------- parsing

namespace detail {

inline Rational rational_at(const nlohmann::json& j, const std::string& path)
{
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const InputError& e) {
            throw InputError(path + ": " + e.what());
        }
    }
    if (j.is_number_integer()) return j.is_number_unsigned() ? Rational(j.get<unsigned long>()) : Rational(j.get<long>());
    if (j.is_number_float()) throw InputError(path + ": decimal number " + j.dump() + " is not exact; write it as \"p/q\"");
    if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
        const long num = j[0].get<long>(), den = j[1].get<long>();
        if (den == 0) throw InputError(path + ": zero denominator");
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    throw InputError(path + ": expected a rational as \"p/q\" or [num, den], got " + j.dump());
}

inline std::vector<Rational> rationals_at(const nlohmann::json& j, const std::string& path, std::size_t width)
{
    if (!j.is_array()) throw InputError(path + ": expected an array of " + std::to_string(width) + " rationals");
    if (j.size() != width) throw InputError(path + ": expected " + std::to_string(width) + " entries, got " + std::to_string(j.size()));
    std::vector<Rational> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rational_at(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline Prob prob_at(const nlohmann::json& j, const std::string& path, std::size_t width)
{
    auto mass = rationals_at(j, path, width);
    for (std::size_t i = 0; i < mass.size(); ++i)
        if (mass[i] < 0) throw InputError(path + "[" + std::to_string(i) + "]: negative mass " + to_string(mass[i]));
    const Rational total = sum(mass);
    if (total != 1) throw InputError(path + ": masses sum to " + to_string(total) + ", not 1");
    return Prob(std::move(mass));
}

inline nlohmann::json parse_document(const std::string& text, const std::string& origin)
{
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(origin + ": " + e.what());
    }
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace detail

inline SystemDescription parse_system(const std::string& text, const std::string& origin = "<input>")
{
    const auto doc = detail::parse_document(text, origin);
    if (!doc.is_object()) throw InputError(origin + ": top level must be an object");
    for (const auto& [key, _] : doc.items())
        if (key != "omega_size" && key != "map" && key != "generators" && key != "probability")
            throw InputError(origin + ": unknown field \"" + key + "\"");

    SystemDescription sys;
    if (!doc.contains("omega_size") || !doc["omega_size"].is_number_integer()) throw InputError(origin + ": omega_size: required positive integer");
    const long m = doc["omega_size"].get<long>();
    if (m < 1 || m > static_cast<long>(kMaxSpaceSize)) throw InputError(origin + ": omega_size: must lie in [1, 16], got " + std::to_string(m));
    sys.omega_size = static_cast<std::size_t>(m);

    if (!doc.contains("map") || !doc["map"].is_array()) throw InputError(origin + ": map: required array of point indices");
    const auto& map = doc["map"];
    if (map.size() != sys.omega_size)
        throw InputError(origin + ": map: expected " + std::to_string(m) + " entries, got " + std::to_string(map.size()));
    std::vector<std::size_t> table;
    for (std::size_t i = 0; i < map.size(); ++i) {
        const std::string path = origin + ": map[" + std::to_string(i) + "]";
        if (!map[i].is_number_integer()) throw InputError(path + ": expected an integer, got " + map[i].dump());
        const long t = map[i].get<long>();
        if (t < 0 || t >= m) throw InputError(path + ": " + std::to_string(t) + " is out of range [0, " + std::to_string(m) + ")");
        table.push_back(static_cast<std::size_t>(t));
    }
    sys.map = Transformation(std::move(table));

    if (doc.contains("generators")) {
        const auto& gens = doc["generators"];
        if (!gens.is_array()) throw InputError(origin + ": generators: expected an array of probabilities");
        for (std::size_t i = 0; i < gens.size(); ++i)
            sys.generators.push_back(detail::prob_at(gens[i], origin + ": generators[" + std::to_string(i) + "]", sys.omega_size));
    }
    if (doc.contains("probability")) sys.probability = detail::prob_at(doc["probability"], origin + ": probability", sys.omega_size);
    if (sys.generators.empty() && !sys.probability) throw InputError(origin + ": needs a non-empty \"generators\" array or a \"probability\"");
    return sys;
}

inline SystemDescription load_system(const std::string& path) { return parse_system(detail::read_file(path), path); }

/// {"probability": [...]} or a bare array.
inline Prob load_probability(const std::string& path, std::size_t width)
{
    const auto doc = detail::parse_document(detail::read_file(path), path);
    if (doc.is_object()) {
        if (!doc.contains("probability") || doc.size() != 1) throw InputError(path + ": expected {\"probability\": [...]}");
        return detail::prob_at(doc["probability"], path + ": probability", width);
    }
    return detail::prob_at(doc, path, width);
}

/// {"function": [...]} or a bare array.
inline FunctionOnSpace load_function(const std::string& path, std::size_t width)
{
    const auto doc = detail::parse_document(detail::read_file(path), path);
    if (doc.is_object()) {
        if (!doc.contains("function") || doc.size() != 1) throw InputError(path + ": expected {\"function\": [...]}");
        return FunctionOnSpace(detail::rationals_at(doc["function"], path + ": function", width));
    }
    return FunctionOnSpace(detail::rationals_at(doc, path, width));
}

// -------------------------------------------------------------- rendering

namespace detail {

inline Json rat(const Rational& r) { return to_string(r); }

inline Json rats(const std::vector<Rational>& v)
{
    Json out = Json::array();
    for (const auto& x : v) out.push_back(to_string(x));
    return out;
}

inline Json set_json(const SubsetMask& s)
{
    Json out = Json::array();
    for (auto w : s.points()) out.push_back(w);
    return out;
}

inline Json prob_json(const Prob& p) { return rats(p.masses()); }

inline Json probs_json(const std::vector<Prob>& ps)
{
    Json out = Json::array();
    for (const auto& p : ps) out.push_back(prob_json(p));
    return out;
}

inline Json cells_json(const Partition& part)
{
    Json out = Json::array();
    for (const auto& c : part.cells()) out.push_back(set_json(c));
    return out;
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline std::string values_string(const std::vector<Rational>& v)
{
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + to_string(v[i]);
    return out + ")";
}

/// Left-aligned columns separated by two spaces, with a dashed rule under the header.
class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    std::string render(const std::string& indent = "  ") const
    {
        std::vector<std::size_t> width(header_.size(), 0);
        auto measure = [&](const std::vector<std::string>& row) {
            for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
        };
        measure(header_);
        for (const auto& r : rows_) measure(r);
        auto line = [&](const std::vector<std::string>& row) {
            std::string out = indent;
            for (std::size_t i = 0; i < width.size(); ++i) {
                const std::string cell = i < row.size() ? row[i] : "";
                out += cell;
                if (i + 1 < width.size()) out += std::string(width[i] - cell.size() + 2, ' ');
            }
            while (!out.empty() && out.back() == ' ') out.pop_back();
            return out + "\n";
        };
        std::string out = line(header_);
        std::vector<std::string> rule;
        for (auto w : width) rule.push_back(std::string(w, '-'));
        out += line(rule);
        for (const auto& r : rows_) out += line(r);
        return out;
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Two-column key/value listing.
class Facts {
public:
    void add(std::string key, std::string value) { rows_.emplace_back(std::move(key), std::move(value)); }
    std::string render(const std::string& indent = "  ") const
    {
        std::size_t w = 0;
        for (const auto& [k, _] : rows_) w = std::max(w, k.size());
        std::string out;
        for (const auto& [k, v] : rows_) out += indent + k + std::string(w - k.size() + 2, ' ') + v + "\n";
        return out;
    }

private:
    std::vector<std::pair<std::string, std::string>> rows_;
};

} // namespace detail

// --------------------------------------------------------------- commands

struct Options {
    std::optional<SystemDescription> system;
    std::string system_path;
    std::optional<Prob> probability;
    std::optional<FunctionOnSpace> function;
    std::uint64_t seed = 42;
    std::size_t nmax = 12;
    std::size_t instances = 200;
};

/// Pretty-prints with two-space indentation, keeping arrays of scalars on one line.
inline void write_json(const Json& j, std::string& out, std::size_t depth = 0)
{
    const std::string pad(2 * depth + 2, ' '), close(2 * depth, ' ');
    auto scalar = [](const Json& x) { return !x.is_array() && !x.is_object(); };
    if (j.is_object() && !j.empty()) {
        out += "{\n";
        std::size_t i = 0;
        for (const auto& [key, value] : j.items()) {
            out += pad + Json(key).dump() + ": ";
            write_json(value, out, depth + 1);
            out += ++i < j.size() ? ",\n" : "\n";
        }
        out += close + "}";
    } else if (j.is_array() && !j.empty() && !std::all_of(j.begin(), j.end(), scalar)) {
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            out += pad;
            write_json(j[i], out, depth + 1);
            out += i + 1 < j.size() ? ",\n" : "\n";
        }
        out += close + "]";
    } else if (j.is_array()) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ", " : "") + j[i].dump();
        out += "]";
    } else {
        out += j.dump();
    }
}

struct Report {
    Json json;
    std::string human;
    int exit_code = 0;

    std::string render(bool json_only) const
    {
        std::string out;
        write_json(json, out);
        out += "\n";
        if (!json_only) out += "\n" + human;
        return out;
    }
};

inline const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names{"analyze", "check-fec", "decompose", "koopman", "birkhoff", "independence", "noninvariant", "oracle-verify"};
    return names;
}

namespace detail {

inline const SystemDescription& need_system(const Options& opt)
{
    if (!opt.system) throw InputError("this command needs a system file");
    return *opt.system;
}

inline UpperProb need_capacity(const SystemDescription& sys)
{
    if (sys.generators.empty()) throw InputError("this command needs \"generators\" in the system file");
    return envelope(sys.generators);
}

inline Report precondition_report(const std::string& command, const std::string& message)
{
    Report r;
    r.json["command"] = command;
    r.json["status"] = "precondition_failed";
    r.json["message"] = message;
    r.human = "ergocap " + command + "\n  precondition failed: " + message + "\n";
    r.exit_code = 2;
    return r;
}

inline Json fec_json(const FECOutcome& outcome)
{
    Json j;
    if (const auto* fec = std::get_if<FECResult>(&outcome)) {
        j["status"] = "FEC";
        j["n"] = fec->size();
        j["cells"] = cells_json(fec->partition);
        j["ergodic_measures"] = probs_json(fec->ergodic_measures);
        Json comps = Json::array();
        for (const auto& vi : fec->components) {
            Json c;
            c["generators"] = probs_json(vi.generators());
            c["null_support"] = set_json(null_support(vi));
            comps.push_back(c);
        }
        j["components"] = comps;
    } else {
        const auto& nf = std::get<NotFEC>(outcome);
        j["status"] = "NotFEC";
        j["witness"] = nf.witness ? set_json(*nf.witness) : Json(nullptr);
        j["reason"] = nf.reason;
    }
    return j;
}

inline std::string fec_human(const FECOutcome& outcome)
{
    if (const auto* fec = std::get_if<FECResult>(&outcome)) {
        Table t({"i", "cell A_i", "Q_i", "V_i generators"});
        for (std::size_t i = 0; i < fec->size(); ++i)
            t.add({std::to_string(i + 1), fec->partition[i].to_string(), fec->ergodic_measures[i].to_string(),
                   std::to_string(fec->components[i].generators().size())});
        return "finite ergodic components (n = " + std::to_string(fec->size()) + ")\n" + t.render();
    }
    const auto& nf = std::get<NotFEC>(outcome);
    return "not of finite ergodic components\n  " + nf.reason + "\n";
}

inline Report analyze(const Options& opt)
{
    const auto& sys = need_system(opt);
    const UpperProb v = need_capacity(sys);
    Report r;
    Json& j = r.json;
    j["command"] = "analyze";
    j["omega_size"] = sys.omega_size;
    j["map"] = sys.map.table();
    j["generators"] = probs_json(v.generators());
    const bool invariant = is_invariant_capacity(v, sys.map);
    j["invariant"] = invariant;
    Facts facts;
    facts.add("omega size", std::to_string(sys.omega_size));
    facts.add("generators", std::to_string(v.generators().size()));
    facts.add("invariant", yes_no(invariant));
    if (!invariant) {
        j["status"] = "precondition_failed";
        j["message"] = "V(T^{-1}A) != V(A) for some A";
        r.human = "ergocap analyze\n" + facts.render() + "  the capacity is not invariant; nothing further is defined\n";
        r.exit_code = 2;
        return r;
    }

    const auto comps = components(sys.map);
    const auto witness = zero_one_witness(v, sys.map);
    const bool fz = is_fz_ergodic(v, sys.map);
    const auto outcome = fec_decompose(v, sys.map);
    const auto ergodic = ergodic_core_measures(v, sys.map);
    const std::size_t mult = eigenvalue_one_multiplicity(v, sys.map);

    j["components"] = cells_json(comps);
    j["invariant_set_count"] = invariant_sets(sys.map).size();
    j["null_support"] = set_json(null_support(v));
    j["zero_one"] = !witness;
    j["zero_one_witness"] = witness ? set_json(*witness) : Json(nullptr);
    j["fz_ergodic"] = fz;
    j["fec"] = fec_json(outcome);
    j["koopman_multiplicity"] = mult;
    j["ergodic_core_measures"] = probs_json(ergodic);
    const bool is_fec = std::holds_alternative<FECResult>(outcome);
    j["status"] = is_fec ? "ok" : "not_fec";

    facts.add("components", std::to_string(comps.size()));
    facts.add("null support", null_support(v).to_string());
    facts.add("zero-one condition", witness ? "no, witness " + witness->to_string() + " has V = " + to_string(v(*witness)) : "yes");
    facts.add("FZ-ergodic", yes_no(fz));
    facts.add("Koopman multiplicity", std::to_string(mult));
    facts.add("ergodic core measures", std::to_string(ergodic.size()));
    std::string human = "ergocap analyze\n" + facts.render() + "\n" + fec_human(outcome);
    if (!ergodic.empty()) {
        Table t({"#", "ergodic core measure"});
        for (std::size_t i = 0; i < ergodic.size(); ++i) t.add({std::to_string(i + 1), ergodic[i].to_string()});
        human += "\n" + t.render();
    }
    r.human = human;
    r.exit_code = is_fec ? 0 : 2;
    return r;
}

inline Report check_fec(const Options& opt)
{
    const auto& sys = need_system(opt);
    const UpperProb v = need_capacity(sys);
    if (!is_invariant_capacity(v, sys.map)) return precondition_report("check-fec", "the capacity is not invariant");
    const bool zero_one = zero_one_condition(v, sys.map);
    const auto outcome = fec_decompose(v, sys.map);
    const bool fec_ok = std::holds_alternative<FECResult>(outcome);
    const bool unique = unique_vertex_decomposition(v, sys.map);
    const bool extreme = extreme_points_check(v, sys.map);
    const bool agree = zero_one == fec_ok && fec_ok == unique && unique == extreme;

    Report r;
    r.json["command"] = "check-fec";
    r.json["zero_one"] = zero_one;
    r.json["fec_decompose"] = fec_ok;
    r.json["unique_vertex_decomposition"] = unique;
    r.json["extreme_points"] = extreme;
    r.json["predicates_agree"] = agree;
    r.json["fec"] = fec_json(outcome);
    r.json["status"] = fec_ok ? "ok" : "not_fec";

    Table t({"predicate", "value"});
    t.add({"V(A) in {0,1} on invariant sets", yes_no(zero_one)});
    t.add({"FZ-ergodic component extraction", yes_no(fec_ok)});
    t.add({"unique decomposition of invariant core vertices", yes_no(unique)});
    t.add({"invariant core vertices are the ergodic core measures", yes_no(extreme)});
    r.human = "ergocap check-fec\n" + t.render() + "  predicates agree: " + yes_no(agree) + "\n\n" + fec_human(outcome);
    r.exit_code = fec_ok ? 0 : 2;
    return r;
}

inline Report decompose(const Options& opt)
{
    const auto& sys = need_system(opt);
    const UpperProb v = need_capacity(sys);
    if (!opt.probability) throw InputError("decompose needs --probability");
    const Prob& p = *opt.probability;
    if (p.size() != sys.omega_size) throw InputError("probability width differs from omega_size");
    if (!is_invariant_capacity(v, sys.map)) return precondition_report("decompose", "the capacity is not invariant");
    if (!is_invariant(p, sys.map)) return precondition_report("decompose", "the probability is not invariant");
    if (!core_contains(v, p)) return precondition_report("decompose", "the probability is not in core(V)");

    Report r;
    r.json["command"] = "decompose";
    r.json["probability"] = prob_json(p);
    std::string human = "ergocap decompose\n  P = " + p.to_string() + "\n\n";
    const auto outcome = fec_decompose(v, sys.map);
    bool is_fec = false;
    if (const auto* fec = std::get_if<FECResult>(&outcome)) {
        is_fec = true;
        const auto d = decompose_invariant(v, sys.map, *fec, p);
        Json jd;
        jd["cells"] = cells_json(fec->partition);
        jd["coefficients"] = rats(d.coefficients);
        jd["ergodic_measures"] = probs_json(fec->ergodic_measures);
        jd["reconstructs"] = true;
        r.json["decomposition"] = jd;
        Table t({"i", "cell A_i", "alpha_i", "Q_i"});
        for (std::size_t i = 0; i < fec->size(); ++i)
            t.add({std::to_string(i + 1), fec->partition[i].to_string(), to_string(d.coefficients[i]), fec->ergodic_measures[i].to_string()});
        human += "P = sum alpha_i Q_i over the finite ergodic components\n" + t.render();
    } else {
        r.json["decomposition"] = fec_json(outcome);
        human += fec_human(outcome);
    }

    if (is_invertible(sys.map)) {
        if (ergodic_core_measures(v, sys.map).empty()) {
            r.json["full_decomposition"] = nullptr;
            human += "\nno ergodic probability lies in the core; the decomposition with residual is undefined\n";
        } else {
            const auto full = full_decomposition(v, sys.map, p);
            Json jf;
            jf["coefficients"] = rats(full.result.coefficients);
            jf["ergodic_measures"] = probs_json(full.ergodic);
            jf["residual"] = full.result.residual ? prob_json(*full.result.residual) : Json(nullptr);
            jf["residual_invariant"] = full.residual_invariant;
            jf["residual_in_core"] = full.residual_in_core;
            jf["residual_singular"] = full.residual_singular;
            r.json["full_decomposition"] = jf;
            Table t({"i", "alpha_i", "measure"});
            for (std::size_t i = 0; i < full.ergodic.size(); ++i)
                t.add({std::to_string(i + 1), to_string(full.result.coefficients[i]), full.ergodic[i].to_string()});
            t.add({"residual", to_string(full.result.coefficients.back()), full.result.residual ? full.result.residual->to_string() : "-"});
            human += "\nP = sum alpha_i Q_i + alpha_{n+1} Q_{n+1} over all ergodic core measures\n" + t.render();
            if (full.result.residual) {
                Facts f;
                f.add("residual invariant", yes_no(full.residual_invariant));
                f.add("residual in core(V)", yes_no(full.residual_in_core));
                f.add("residual singular to each Q_i", yes_no(full.residual_singular));
                human += f.render();
            }
        }
    } else {
        r.json["full_decomposition"] = nullptr;
        human += "\nmap is not invertible; the decomposition with residual is skipped\n";
    }
    r.json["status"] = is_fec ? "ok" : "not_fec";
    r.human = human;
    r.exit_code = is_fec ? 0 : 2;
    return r;
}

inline Report koopman(const Options& opt)
{
    const auto& sys = need_system(opt);
    const UpperProb v = need_capacity(sys);
    const auto k = koopman_matrix(sys.map);
    Report r;
    r.json["command"] = "koopman";
    r.json["matrix"] = k.dense();
    std::string human = "ergocap koopman\n  (U_T f)(w) = f(T w)\n";
    {
        std::vector<std::string> header{"w"};
        for (std::size_t c = 0; c < k.size(); ++c) header.push_back(std::to_string(c));
        Table t(header);
        for (std::size_t w = 0; w < k.size(); ++w) {
            std::vector<std::string> row{std::to_string(w)};
            for (std::size_t c = 0; c < k.size(); ++c) row.push_back(std::to_string(k(w, c)));
            t.add(row);
        }
        human += t.render();
    }
    if (!is_invariant_capacity(v, sys.map)) {
        r.json["status"] = "precondition_failed";
        r.json["message"] = "the capacity is not invariant";
        r.human = human + "\n  the capacity is not invariant; the eigenspace modulo null sets is undefined\n";
        r.exit_code = 2;
        return r;
    }
    const auto basis = invariant_function_basis(v, sys.map);
    Json jb = Json::array();
    for (const auto& b : basis) jb.push_back(rats(b.values()));
    r.json["null_support"] = set_json(null_support(v));
    r.json["eigenvalue_one_basis"] = jb;
    r.json["eigenvalue_one_multiplicity"] = basis.size();
    const auto outcome = fec_decompose(v, sys.map);
    const auto* fec = std::get_if<FECResult>(&outcome);
    r.json["fec_cells"] = fec ? Json(fec->size()) : Json(nullptr);
    r.json["status"] = "ok";

    Table t({"#", "basis function on null support " + null_support(v).to_string()});
    for (std::size_t i = 0; i < basis.size(); ++i) t.add({std::to_string(i + 1), values_string(basis[i].values())});
    human += "\n" + t.render();
    Facts f;
    f.add("multiplicity of eigenvalue 1", std::to_string(basis.size()));
    f.add("FEC cells", fec ? std::to_string(fec->size()) : "not FEC");
    r.human = human + f.render();
    return r;
}

inline Report birkhoff(const Options& opt)
{
    const auto& sys = need_system(opt);
    const UpperProb v = need_capacity(sys);
    if (!opt.function) throw InputError("birkhoff needs --function");
    const auto& f = *opt.function;
    if (f.size() != sys.omega_size) throw InputError("function width differs from omega_size");

    Report r;
    r.json["command"] = "birkhoff";
    r.json["function"] = rats(f.values());
    const auto limit = birkhoff_limit(sys.map, f);
    r.json["limit"] = rats(limit.values());
    Json trace = Json::array();
    for (std::size_t n = 1; n <= opt.nmax; ++n) trace.push_back(rats(birkhoff_average(sys.map, f, n).values()));
    r.json["trace"] = trace;

    std::string human = "ergocap birkhoff\n";
    std::vector<std::string> header{"w", "f(w)", "limit"};
    for (std::size_t n = 1; n <= opt.nmax; ++n) header.push_back("N=" + std::to_string(n));
    Table t(header);
    for (std::size_t w = 0; w < f.size(); ++w) {
        std::vector<std::string> row{std::to_string(w), to_string(f[w]), to_string(limit[w])};
        for (std::size_t n = 0; n < opt.nmax; ++n) row.push_back(trace[n][w].get<std::string>());
        t.add(row);
    }
    human += t.render();

    if (!is_invariant_capacity(v, sys.map)) {
        r.json["status"] = "precondition_failed";
        r.json["message"] = "the capacity is not invariant";
        r.human = human + "\n  the capacity is not invariant; no multi-valued limit is defined\n";
        r.exit_code = 2;
        return r;
    }
    const auto outcome = fec_decompose(v, sys.map);
    if (const auto* fec = std::get_if<FECResult>(&outcome)) {
        const auto predicted = multivalue_limit(*fec, f);
        const bool ok = verify_multivalue_lln(v, sys.map, *fec, f);
        Json values = Json::array();
        for (const auto& q : fec->ergodic_measures) values.push_back(rat(integrate(f, q)));
        r.json["cells"] = cells_json(fec->partition);
        r.json["component_means"] = values;
        r.json["predicted"] = rats(predicted.values());
        r.json["holds_on_null_support"] = ok;
        r.json["status"] = ok ? "ok" : "failed";
        Table c({"i", "cell A_i", "integral of f dQ_i"});
        for (std::size_t i = 0; i < fec->size(); ++i) c.add({std::to_string(i + 1), fec->partition[i].to_string(), values[i].get<std::string>()});
        human += "\n" + c.render() + "  limit = sum_i (int f dQ_i) 1_{A_i} on " + null_support(v).to_string() + ": " + yes_no(ok) + "\n";
        r.exit_code = ok ? 0 : 2;
    } else {
        r.json["fec"] = fec_json(outcome);
        r.json["status"] = "not_fec";
        human += "\n" + fec_human(outcome);
        r.exit_code = 2;
    }
    r.human = human;
    return r;
}

/// All pairs when 4^m is small, otherwise 4096 seeded random pairs.
inline std::vector<std::pair<SubsetMask, SubsetMask>> pairs_for(std::size_t m, std::uint64_t seed, bool& exhaustive)
{
    std::vector<std::pair<SubsetMask, SubsetMask>> out;
    const auto subsets = all_subsets(m);
    exhaustive = m <= 8;
    if (exhaustive) {
        for (const auto& b : subsets)
            for (const auto& c : subsets) out.emplace_back(b, c);
        return out;
    }
    random::Rng rng(seed);
    for (int i = 0; i < 4096; ++i) out.emplace_back(subsets[rng.index(subsets.size())], subsets[rng.index(subsets.size())]);
    return out;
}

inline Json pair_json(const SubsetMask& b, const SubsetMask& c, const Rational& lhs, const Rational& rhs)
{
    Json j;
    j["B"] = set_json(b);
    j["C"] = set_json(c);
    j["lhs"] = rat(lhs);
    j["rhs"] = rat(rhs);
    return j;
}

inline Report independence(const Options& opt)
{
    const auto& sys = need_system(opt);
    const UpperProb v = need_capacity(sys);
    if (!is_invariant_capacity(v, sys.map)) return precondition_report("independence", "the capacity is not invariant");
    const auto outcome = fec_decompose(v, sys.map);
    const auto* fec = std::get_if<FECResult>(&outcome);
    if (!fec) {
        Report r = precondition_report("independence", "system is not FEC: " + std::get<NotFEC>(outcome).reason);
        r.json["fec"] = fec_json(outcome);
        return r;
    }
    const std::size_t m = sys.omega_size;
    bool exhaustive = false;
    const auto pairs = pairs_for(m, opt.seed, exhaustive);

    std::size_t choquet_fail = 0, order_differs = 0;
    Json failures = Json::array();
    Json order_example = nullptr;
    for (const auto& [b, c] : pairs) {
        const auto res = asymptotic_independence_choquet(v, sys.map, *fec, b, c);
        if (!res.equal) {
            ++choquet_fail;
            if (failures.size() < 10) failures.push_back(pair_json(b, c, res.lhs, res.rhs));
        }
        if (res.index_order_differs) {
            ++order_differs;
            if (order_example.is_null()) {
                order_example = pair_json(b, c, res.lhs, res.rhs);
                order_example["rhs_index_order"] = rat(res.rhs_index_order);
            }
        }
    }

    std::vector<Prob> core_probs = core_vertices(v);
    if (opt.probability) {
        if (!core_contains(v, *opt.probability)) return precondition_report("independence", "the probability is not in core(V)");
        core_probs.push_back(*opt.probability);
    }
    std::size_t core_fail = 0;
    Json core_failures = Json::array();
    for (const auto& p : core_probs)
        for (const auto& [b, c] : pairs) {
            const auto res = asymptotic_independence_core(v, sys.map, *fec, p, b, c);
            if (!res.equal) {
                ++core_fail;
                if (core_failures.size() < 10) {
                    auto jf = pair_json(b, c, res.lhs, res.rhs);
                    jf["P"] = prob_json(p);
                    core_failures.push_back(jf);
                }
            }
        }

    const SubsetMask full = SubsetMask::full(m);
    const auto traced = asymptotic_independence_choquet(v, sys.map, *fec, full, fec->partition[0], opt.nmax);

    Report r;
    Json& j = r.json;
    j["command"] = "independence";
    j["cells"] = cells_json(fec->partition);
    j["pairs_checked"] = pairs.size();
    j["exhaustive"] = exhaustive;
    j["choquet"] = {{"all_equal", choquet_fail == 0}, {"failures", failures}, {"index_order_differs", order_differs}, {"index_order_example", order_example}};
    j["core"] = {{"probabilities", core_probs.size()}, {"all_equal", core_fail == 0}, {"failures", core_failures}};
    Json jt;
    jt["B"] = set_json(full);
    jt["C"] = set_json(fec->partition[0]);
    jt["limit"] = rat(traced.lhs);
    jt["values"] = rats(traced.trace);
    j["trace"] = jt;
    const bool ok = choquet_fail == 0 && core_fail == 0;
    j["status"] = ok ? "ok" : "failed";

    Facts f;
    f.add("pairs (B, C)", std::to_string(pairs.size()) + (exhaustive ? " (all)" : " (sampled)"));
    f.add("Choquet form holds", yes_no(choquet_fail == 0) + (choquet_fail ? ", " + std::to_string(choquet_fail) + " failures" : ""));
    f.add("unsorted telescoping differs", std::to_string(order_differs) + " pairs");
    f.add("core probabilities", std::to_string(core_probs.size()));
    f.add("core form holds", yes_no(core_fail == 0) + (core_fail ? ", " + std::to_string(core_fail) + " failures" : ""));
    std::string human = "ergocap independence\n" + f.render();
    if (!traced.trace.empty()) {
        Table t({"N", "Choquet integral of the partial average"});
        for (std::size_t n = 0; n < traced.trace.size(); ++n) t.add({std::to_string(n + 1), to_string(traced.trace[n])});
        human += "\ntrace for B = " + full.to_string() + ", C = " + fec->partition[0].to_string() + " (limit " + to_string(traced.lhs) + ")\n" + t.render();
    }
    r.human = human;
    r.exit_code = ok ? 0 : 2;
    return r;
}

inline Report noninvariant(const Options& opt)
{
    const auto& sys = need_system(opt);
    std::optional<Prob> p = opt.probability ? opt.probability : sys.probability;
    if (!p) throw InputError("noninvariant needs --probability or a \"probability\" field");
    if (p->size() != sys.omega_size) throw InputError("probability width differs from omega_size");
    if (!is_invertible(sys.map)) return precondition_report("noninvariant", "the map is not a permutation");

    const NoninvariantSystem ns(*p, sys.map);
    const auto part = irreducible_partition(ns);
    const auto report = verify_construction(part, sys.map);
    const UpperProb v = combined_capacity(part);

    std::vector<FunctionOnSpace> fs;
    for (std::size_t w = 0; w < sys.omega_size; ++w) fs.push_back(FunctionOnSpace::indicator(SubsetMask::singleton(w, sys.omega_size)));
    if (opt.function) {
        if (opt.function->size() != sys.omega_size) throw InputError("function width differs from omega_size");
        fs.push_back(*opt.function);
    }
    bool lln = true;
    for (const auto& f : fs) lln = lln && noninvariant_lln(ns, part, f);

    bool exhaustive = false;
    const auto pairs = pairs_for(sys.omega_size, opt.seed, exhaustive);
    std::size_t indep_fail = 0;
    Json failures = Json::array();
    for (const auto& [b, c] : pairs) {
        const auto res = noninvariant_independence(ns, part, b, c);
        if (!res.equal) {
            ++indep_fail;
            if (failures.size() < 10) failures.push_back(pair_json(b, c, res.lhs, res.rhs));
        }
    }

    Report r;
    Json& j = r.json;
    j["command"] = "noninvariant";
    j["probability"] = prob_json(*p);
    j["invariant"] = is_invariant(*p, sys.map);
    j["invariant_value_set"] = rats(invariant_value_set(*p, sys.map));
    j["cells"] = cells_json(part.cells);
    j["conditionals"] = probs_json(part.conditionals);
    j["limits"] = probs_json(part.limits);
    Json caps = Json::array();
    for (const auto& vj : part.capacities) caps.push_back({{"generators", vj.generators().size()}, {"null_support", set_json(null_support(vj))}});
    j["capacities"] = caps;
    j["construction"] = {{"limits_ergodic", report.limits_ergodic},
                         {"components_fz_ergodic", report.components_fz_ergodic},
                         {"finite_components", report.finite_components},
                         {"zero_one", report.zero_one},
                         {"failures", report.failures}};
    j["combined_capacity_generators"] = probs_json(v.generators());
    j["lln_functions_checked"] = fs.size();
    j["lln"] = lln;
    j["independence"] = {{"pairs_checked", pairs.size()}, {"exhaustive", exhaustive}, {"all_equal", indep_fail == 0}, {"failures", failures}};
    const bool ok = report.all() && lln && indep_fail == 0;
    j["status"] = ok ? "ok" : "failed";

    Facts f;
    f.add("P invariant", yes_no(is_invariant(*p, sys.map)));
    std::string values;
    for (const auto& x : invariant_value_set(*p, sys.map)) values += (values.empty() ? "" : ", ") + to_string(x);
    f.add("P on invariant sets", "{" + values + "}");
    f.add("irreducible cells", std::to_string(part.cells.size()));
    std::string human = "ergocap noninvariant\n" + f.render() + "\n";
    Table t({"j", "cell A_j", "P_j", "Q_j", "V_j generators"});
    for (std::size_t i = 0; i < part.cells.size(); ++i)
        t.add({std::to_string(i + 1), part.cells[i].to_string(), part.conditionals[i].to_string(), part.limits[i].to_string(),
               std::to_string(part.capacities[i].generators().size())});
    human += t.render() + "\n";
    Table c({"check", "result"});
    c.add({"each Q_j ergodic on its cell", yes_no(report.limits_ergodic)});
    c.add({"each V_j invariant and FZ-ergodic", yes_no(report.components_fz_ergodic)});
    c.add({"V = max V_j has finite ergodic components", yes_no(report.finite_components)});
    c.add({"V(A) in {0,1} on invariant sets", yes_no(report.zero_one)});
    c.add({"Birkhoff limits match on supp(P) (" + std::to_string(fs.size()) + " functions)", yes_no(lln)});
    c.add({"independence identity (" + std::to_string(pairs.size()) + " pairs)", yes_no(indep_fail == 0)});
    human += c.render();
    r.human = human;
    r.exit_code = ok ? 0 : 2;
    return r;
}

struct CheckTally {
    std::string name;
    std::size_t checked = 0;
    std::size_t failed = 0;
    Json first_failure = nullptr;

    void record(bool ok, const std::function<Json()>& detail)
    {
        ++checked;
        if (ok) return;
        if (failed++ == 0) first_failure = detail();
    }
};

/// Main path against the oracles on one invariant system.
inline void verify_system(const Transformation& map, const UpperProb& v, random::Rng& rng, std::size_t functions, std::vector<CheckTally>& tally)
{
    const std::size_t m = map.size();
    auto describe = [&] {
        Json j;
        j["map"] = map.table();
        j["generators"] = probs_json(v.generators());
        return j;
    };
    tally[0].record(invariant_sets(map) == oracle::oracle_invariant_sets(map), describe);

    const bool invariant = is_invariant_capacity(v, map);
    if (invariant) {
        const bool zero_one = zero_one_condition(v, map);
        const auto outcome = fec_decompose(v, map);
        const bool fec_ok = std::holds_alternative<FECResult>(outcome);
        const bool unique = unique_vertex_decomposition(v, map);
        const bool extreme = extreme_points_check(v, map);
        tally[1].record(zero_one == fec_ok && fec_ok == unique && unique == extreme, describe);
        tally[2].record(oracle::fec_outcomes_agree(v, outcome, oracle::oracle_fec(v, map)), describe);
        if (const auto* fec = std::get_if<FECResult>(&outcome))
            tally[3].record(eigenvalue_one_multiplicity(v, map) == fec->size(), describe);
    }
    for (std::size_t i = 0; i < functions; ++i) {
        const auto f = random::random_function_values(rng, m);
        tally[4].record(choquet_integral(v, f) == oracle::oracle_choquet(v, f.values()), [&] {
            auto j = describe();
            j["function"] = rats(f.values());
            return j;
        });
    }
    const Prob p = random::random_prob(rng, m);
    const Prob skeleton = invariant_skeleton(p, map);
    bool skel_ok = is_invariant(skeleton, map);
    for (const auto& a : oracle::oracle_invariant_sets(map)) skel_ok = skel_ok && skeleton(a) == p(a);
    if (is_invertible(map)) skel_ok = skel_ok && skeleton == cesaro_limit(p, map);
    tally[5].record(skel_ok, [&] {
        auto j = describe();
        j["probability"] = prob_json(p);
        return j;
    });
    const std::size_t period = oracle::oracle_period(map);
    const auto limit = cesaro_limit(p, map);
    bool ces_ok = true;
    for (const auto& a : all_subsets(m)) {
        // after the transient, the literal average over whole periods is exact
        const auto tail = oracle::oracle_cesaro(p.masses(), map, a, (m + period) * period);
        const auto head = oracle::oracle_cesaro(p.masses(), map, a, m * period);
        const Rational window = (tail.back() * static_cast<unsigned long>((m + period) * period) - head.back() * static_cast<unsigned long>(m * period)) /
                                static_cast<unsigned long>(period * period);
        ces_ok = ces_ok && window == limit(a);
    }
    tally[6].record(ces_ok, [&] {
        auto j = describe();
        j["probability"] = prob_json(p);
        return j;
    });
}

inline Report oracle_verify(const Options& opt)
{
    std::vector<CheckTally> tally{{"invariant sets"},
                                  {"four FEC predicates agree"},
                                  {"FEC extraction matches oracle"},
                                  {"Koopman multiplicity equals cell count"},
                                  {"Choquet integral matches oracle"},
                                  {"invariant skeleton"},
                                  {"Cesaro limit matches literal averages"}};
    random::Rng rng(opt.seed);
    std::size_t systems = 0;
    if (opt.system) {
        const UpperProb v = need_capacity(*opt.system);
        verify_system(opt.system->map, v, rng, opt.instances, tally);
        systems = 1;
    } else {
        for (std::size_t i = 0; i < opt.instances; ++i) {
            const auto inst = random::random_invariant_system(rng);
            verify_system(inst.map, inst.capacity, rng, 3, tally);
        }
        systems = opt.instances;
    }

    Report r;
    r.json["command"] = "oracle-verify";
    r.json["seed"] = opt.seed;
    r.json["source"] = opt.system ? opt.system_path : "random";
    r.json["systems"] = systems;
    Json checks = Json::array();
    bool ok = true;
    Table t({"check", "checked", "failed"});
    for (const auto& c : tally) {
        checks.push_back({{"name", c.name}, {"checked", c.checked}, {"failed", c.failed}, {"first_failure", c.first_failure}});
        t.add({c.name, std::to_string(c.checked), std::to_string(c.failed)});
        ok = ok && c.failed == 0;
    }
    r.json["checks"] = checks;
    r.json["all_pass"] = ok;
    r.json["status"] = ok ? "ok" : "failed";
    r.human = "ergocap oracle-verify (seed " + std::to_string(opt.seed) + ", " + std::to_string(systems) + " systems)\n" + t.render() +
              "  " + (ok ? "all checks pass" : "FAILURES present") + "\n";
    r.exit_code = ok ? 0 : 2;
    return r;
}

} // namespace detail

/// Dispatches one command. Input problems surface as InputError; failed
/// preconditions are reported with exit code 2.
inline Report run_command(const std::string& command, const Options& opt)
{
    try {
        if (command == "analyze") return detail::analyze(opt);
        if (command == "check-fec") return detail::check_fec(opt);
        if (command == "decompose") return detail::decompose(opt);
        if (command == "koopman") return detail::koopman(opt);
        if (command == "birkhoff") return detail::birkhoff(opt);
        if (command == "independence") return detail::independence(opt);
        if (command == "noninvariant") return detail::noninvariant(opt);
        if (command == "oracle-verify") return detail::oracle_verify(opt);
    } catch (const PreconditionError& e) {
        return detail::precondition_report(command, e.what());
    }
    throw InputError("unknown command \"" + command + "\"");
}

} // namespace ergocap::cli
