#include "riskdp/model_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace riskdp {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& source, const std::string& what) {
    throw std::runtime_error(source + ": " + what);
}

int require_int(const json& j, const char* key, const std::string& source,
                const std::string& where) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
        fail(source, where + ": missing integer field '" + std::string(key) + "'");
    }
    return j[key].get<int>();
}

double require_number(const json& j, const char* key, const std::string& source,
                      const std::string& where) {
    if (!j.contains(key) || !j[key].is_number()) {
        fail(source, where + ": missing numeric field '" + std::string(key) + "'");
    }
    return j[key].get<double>();
}

int checked_state(int x, int states, const std::string& source, const std::string& where) {
    if (x < 0 || x >= states) {
        std::ostringstream msg;
        msg << where << ": state " << x << " out of range [0, " << states << ")";
        fail(source, msg.str());
    }
    return x;
}

int checked_action(int a, int actions, const std::string& source, const std::string& where) {
    if (a < 0 || a >= actions) {
        std::ostringstream msg;
        msg << where << ": action " << a << " out of range [0, " << actions << ")";
        fail(source, msg.str());
    }
    return a;
}

}  // namespace

FiniteMdp load_model_json(std::istream& in, const std::string& source_name) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(source_name, std::string("parse error: ") + e.what());
    }
    if (!doc.is_object()) {
        fail(source_name, "top-level document must be an object");
    }
    const int states = require_int(doc, "states", source_name, "document");
    const int actions = require_int(doc, "actions", source_name, "document");
    if (states < 1 || actions < 1) {
        fail(source_name, "'states' and 'actions' must be positive");
    }
    FiniteMdp mdp(states, actions);

    if (!doc.contains("admissible") || !doc["admissible"].is_array() ||
        static_cast<int>(doc["admissible"].size()) != states) {
        fail(source_name, "'admissible' must be an array with one entry per state");
    }
    for (int x = 0; x < states; ++x) {
        const json& row = doc["admissible"][x];
        std::ostringstream where;
        where << "admissible[" << x << "]";
        if (!row.is_array()) {
            fail(source_name, where.str() + ": expected an array of action indices");
        }
        std::vector<int> acts;
        for (const json& a : row) {
            if (!a.is_number_integer()) {
                fail(source_name, where.str() + ": expected an array of action indices");
            }
            acts.push_back(checked_action(a.get<int>(), actions, source_name, where.str()));
        }
        mdp.set_admissible(x, std::move(acts));
    }

    if (!doc.contains("transitions") || !doc["transitions"].is_array()) {
        fail(source_name, "'transitions' must be an array of records");
    }
    for (std::size_t i = 0; i < doc["transitions"].size(); ++i) {
        const json& rec = doc["transitions"][i];
        std::ostringstream where;
        where << "transitions[" << i << "]";
        const int x = checked_state(require_int(rec, "x", source_name, where.str()), states,
                                    source_name, where.str());
        const int a = checked_action(require_int(rec, "a", source_name, where.str()), actions,
                                     source_name, where.str());
        const int x2 = checked_state(require_int(rec, "x2", source_name, where.str()), states,
                                     source_name, where.str());
        const double p = require_number(rec, "p", source_name, where.str());
        if (!(p > 0.0) || p > 1.0) {
            std::ostringstream msg;
            msg << where.str() << ": probability " << p << " outside (0, 1]";
            fail(source_name, msg.str());
        }
        mdp.add_transition(x, a, x2, p);
    }

    if (!doc.contains("costs") || !doc["costs"].is_array()) {
        fail(source_name, "'costs' must be an array of records");
    }
    for (std::size_t i = 0; i < doc["costs"].size(); ++i) {
        const json& rec = doc["costs"][i];
        std::ostringstream where;
        where << "costs[" << i << "]";
        const int x = checked_state(require_int(rec, "x", source_name, where.str()), states,
                                    source_name, where.str());
        const int a = checked_action(require_int(rec, "a", source_name, where.str()), actions,
                                     source_name, where.str());
        const double c = require_number(rec, "c", source_name, where.str());
        if (!(c >= 0.0)) {
            std::ostringstream msg;
            msg << where.str() << ": cost " << c << " is negative";
            fail(source_name, msg.str());
        }
        mdp.set_cost(x, a, c);
    }

    if (doc.contains("absorbing")) {
        if (!doc["absorbing"].is_array()) {
            fail(source_name, "'absorbing' must be an array of state indices");
        }
        std::vector<int> absorbing;
        for (std::size_t i = 0; i < doc["absorbing"].size(); ++i) {
            const json& rec = doc["absorbing"][i];
            std::ostringstream where;
            where << "absorbing[" << i << "]";
            if (!rec.is_number_integer()) {
                fail(source_name, where.str() + ": expected a state index");
            }
            absorbing.push_back(
                checked_state(rec.get<int>(), states, source_name, where.str()));
        }
        mdp.set_absorbing(std::move(absorbing));
    }

    const std::vector<std::string> violations = validate_model(mdp);
    if (!violations.empty()) {
        std::ostringstream msg;
        msg << "model invalid:";
        for (const std::string& v : violations) {
            msg << "\n  " << v;
        }
        fail(source_name, msg.str());
    }
    return mdp;
}

FiniteMdp load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(path + ": cannot open for reading");
    }
    return load_model_json(in, path);
}

void write_model_json(std::ostream& out, const FiniteMdp& mdp) {
    ordered_json doc;
    doc["states"] = mdp.state_count();
    doc["actions"] = mdp.action_count();
    ordered_json admissible = ordered_json::array();
    for (int x = 0; x < mdp.state_count(); ++x) {
        admissible.push_back(mdp.admissible(x));
    }
    doc["admissible"] = std::move(admissible);
    ordered_json transitions = ordered_json::array();
    ordered_json costs = ordered_json::array();
    for (int x = 0; x < mdp.state_count(); ++x) {
        for (int a : mdp.admissible(x)) {
            const TransitionRow& row = mdp.transitions(x, a);
            for (std::size_t j = 0; j < row.size(); ++j) {
                transitions.push_back({{"x", x},
                                       {"a", a},
                                       {"x2", row.next_states[j]},
                                       {"p", row.probabilities[j]}});
            }
            costs.push_back({{"x", x}, {"a", a}, {"c", mdp.cost(x, a)}});
        }
    }
    doc["transitions"] = std::move(transitions);
    doc["costs"] = std::move(costs);
    if (!mdp.absorbing().empty()) {
        doc["absorbing"] = mdp.absorbing();
    }
    out << doc.dump(2) << '\n';
}

}  // namespace riskdp
