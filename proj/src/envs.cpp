#include "bamdp/envs.hpp"

#include "bamdp/errors.hpp"
#include "bamdp/rng.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <map>
#include <sstream>

namespace bamdp {

using nlohmann::json;

BamdpModel make_bernoulli_chain(double q, int horizon, ChainReward reward) {
    if (q <= 0.5 || q > 1.0) {
        throw ValidationError("chain parameter q must lie in (0.5, 1], got " +
                              std::to_string(q));
    }
    if (horizon < 1) throw ValidationError("chain horizon must be >= 1");

    const Index S = horizon + 1;  // states 0..H, absorbing at the top
    const Index A = 2;            // 0 = "+", 1 = "o"
    MdpEnsemble ens;
    ens.num_states = S;
    ens.num_actions = A;
    ens.horizon = horizon;
    ens.initial_dist = Vector::Zero(S);
    ens.initial_dist(0) = 1.0;
    ens.reward = Matrix::Zero(S, A);
    if (reward == ChainReward::IncrementBonus) {
        for (Index s = 0; s < S; ++s) {
            ens.reward(s, 0) = ens.reward(s, 1) = static_cast<double>(s) / horizon;
        }
    }

    auto chain_transitions = [&](double p_inc_plus) {
        std::vector<Matrix> t(2, Matrix::Zero(S, S));
        for (Index s = 0; s < S; ++s) {
            if (s == S - 1) {
                t[0](s, s) = 1.0;  // absorbing top; identical across hypotheses
                t[1](s, s) = 1.0;
                continue;
            }
            t[0](s, s + 1) = p_inc_plus;
            t[0](s, s) = 1.0 - p_inc_plus;
            t[1](s, s + 1) = 1.0 - p_inc_plus;
            t[1](s, s) = p_inc_plus;
        }
        return t;
    };
    ens.hypotheses.push_back(chain_transitions(q));        // theta_1: "+" increments w.p. q
    ens.hypotheses.push_back(chain_transitions(1.0 - q));  // theta_2: actions flipped
    ens.validate();

    BamdpModel model{std::move(ens), EpistemicState::uniform(2), nullptr};
    return model;
}

BamdpModel make_two_chain(int num_stages) {
    if (num_stages < 1) throw ValidationError("two-chain needs at least one stage");
    const int N = num_stages;
    const Index S = 2 * N + 1;  // 0 = init; stage n occupies states 2n-1 (upper), 2n (lower)
    const Index A = 2;
    const Index K = N + 1;

    // theta_0 = all-ones; theta_n flips bit n. Bit n = 1 means a_1 routes
    // the stage-n transition to the upper chain.
    std::vector<std::vector<int>> bits(K, std::vector<int>(N, 1));
    for (int n = 1; n <= N; ++n) bits[n][n - 1] = 0;
    for (int n = 0; n < N; ++n) {
        int zeros = 0;
        for (Index k = 0; k < K; ++k) zeros += bits[k][n] == 0;
        if (zeros != 1 && static_cast<Index>(zeros) != K - 1) {
            throw ValidationError("two-chain stage " + std::to_string(n + 1) +
                                  " must have exactly one dissenting hypothesis");
        }
    }

    MdpEnsemble ens;
    ens.num_states = S;
    ens.num_actions = A;
    ens.horizon = N + 2;
    ens.reward = Matrix::Zero(S, A);
    ens.initial_dist = Vector::Zero(S);
    ens.initial_dist(0) = 1.0;

    auto upper = [](int stage) { return static_cast<Index>(2 * stage - 1); };
    auto lower = [](int stage) { return static_cast<Index>(2 * stage); };
    for (Index k = 0; k < K; ++k) {
        std::vector<Matrix> t(2, Matrix::Zero(S, S));
        for (int stage = 1; stage <= N; ++stage) {
            const std::vector<Index> sources =
                stage == 1 ? std::vector<Index>{0}
                           : std::vector<Index>{upper(stage - 1), lower(stage - 1)};
            const bool a1_up = bits[static_cast<std::size_t>(k)][stage - 1] == 1;
            for (Index src : sources) {
                t[0](src, a1_up ? upper(stage) : lower(stage)) = 1.0;
                t[1](src, a1_up ? lower(stage) : upper(stage)) = 1.0;
            }
        }
        t[0](upper(N), upper(N)) = 1.0;
        t[1](upper(N), upper(N)) = 1.0;
        t[0](lower(N), lower(N)) = 1.0;
        t[1](lower(N), lower(N)) = 1.0;
        ens.hypotheses.push_back(std::move(t));
    }
    ens.validate();

    BamdpModel model{std::move(ens), EpistemicState::uniform(K), nullptr};
    return model;
}

BamdpModel make_random_bamdp(std::uint64_t seed, Index num_states, Index num_actions,
                             Index num_hypotheses, int horizon, double determinism) {
    if (num_states < 1 || num_actions < 1 || num_hypotheses < 1 || horizon < 1) {
        throw ValidationError("random instance sizes must be >= 1");
    }
    if (determinism < 0.0 || determinism > 1.0) {
        throw ValidationError("determinism must lie in [0, 1]");
    }
    Rng rng(seed);
    MdpEnsemble ens;
    ens.num_states = num_states;
    ens.num_actions = num_actions;
    ens.horizon = horizon;
    ens.initial_dist = Vector::Constant(num_states, 1.0 / static_cast<double>(num_states));
    ens.reward = Matrix::Zero(num_states, num_actions);
    for (Index s = 0; s < num_states; ++s) {
        for (Index a = 0; a < num_actions; ++a) ens.reward(s, a) = rng.uniform01();
    }
    for (Index k = 0; k < num_hypotheses; ++k) {
        std::vector<Matrix> t(static_cast<std::size_t>(num_actions),
                              Matrix::Zero(num_states, num_states));
        for (Index a = 0; a < num_actions; ++a) {
            for (Index s = 0; s < num_states; ++s) {
                Vector row = rng.simplex_point(num_states);
                const Index target = rng.uniform_index(num_states);
                row *= 1.0 - determinism;
                row(target) += determinism;
                t[static_cast<std::size_t>(a)].row(s) = row;
            }
        }
        ens.hypotheses.push_back(std::move(t));
    }
    ens.validate();

    BamdpModel model{std::move(ens), EpistemicState::uniform(num_hypotheses), nullptr};
    return model;
}

namespace {

std::map<std::string, std::string> parse_kv(const std::string& body) {
    std::map<std::string, std::string> kv;
    std::stringstream stream(body);
    std::string item;
    while (std::getline(stream, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw ParseError("env option '" + item + "' is not key=value");
        }
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

double want_double(const std::map<std::string, std::string>& kv, const std::string& key,
                   double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw ParseError("env option " + key + "=" + it->second + " is not a number");
    }
}

long want_long(const std::map<std::string, std::string>& kv, const std::string& key,
               long fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        return std::stol(it->second);
    } catch (const std::exception&) {
        throw ParseError("env option " + key + "=" + it->second + " is not an integer");
    }
}

}  // namespace

BamdpModel make_env(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const auto kv = colon == std::string::npos ? std::map<std::string, std::string>{}
                                               : parse_kv(spec.substr(colon + 1));
    if (name == "chain") {
        const double q = want_double(kv, "q", 0.8);
        const long H = want_long(kv, "H", 3);
        ChainReward reward = ChainReward::Zero;
        if (auto it = kv.find("reward"); it != kv.end()) {
            if (it->second == "increment_bonus") {
                reward = ChainReward::IncrementBonus;
            } else if (it->second != "zero") {
                throw ParseError("unknown chain reward '" + it->second + "'");
            }
        }
        return make_bernoulli_chain(q, static_cast<int>(H), reward);
    }
    if (name == "twochain") {
        return make_two_chain(static_cast<int>(want_long(kv, "N", 2)));
    }
    if (name == "random") {
        return make_random_bamdp(static_cast<std::uint64_t>(want_long(kv, "seed", 0)),
                                 want_long(kv, "S", 3), want_long(kv, "A", 2),
                                 want_long(kv, "K", 2), static_cast<int>(want_long(kv, "H", 3)),
                                 want_double(kv, "det", 0.0));
    }
    throw ParseError("unknown builtin env '" + name + "'");
}

void save_problem(const BamdpModel& model, const std::string& path) {
    const MdpEnsemble& ens = model.ensemble;
    json j;
    j["num_states"] = ens.num_states;
    j["num_actions"] = ens.num_actions;
    j["horizon"] = ens.horizon;
    auto& reward = j["reward"] = json::array();
    for (Index s = 0; s < ens.num_states; ++s) {
        json row = json::array();
        for (Index a = 0; a < ens.num_actions; ++a) row.push_back(ens.reward(s, a));
        reward.push_back(std::move(row));
    }
    auto& beta = j["initial_dist"] = json::array();
    for (Index s = 0; s < ens.num_states; ++s) beta.push_back(ens.initial_dist(s));
    auto& prior = j["prior"] = json::array();
    for (Index k = 0; k < model.prior.size(); ++k) prior.push_back(model.prior(k));
    auto& hypotheses = j["hypotheses"] = json::array();
    for (const auto& hypothesis : ens.hypotheses) {
        json tensor = json::array();  // [state][action][next_state]
        for (Index s = 0; s < ens.num_states; ++s) {
            json per_action = json::array();
            for (Index a = 0; a < ens.num_actions; ++a) {
                json row = json::array();
                for (Index s2 = 0; s2 < ens.num_states; ++s2) {
                    row.push_back(hypothesis[static_cast<std::size_t>(a)](s, s2));
                }
                per_action.push_back(std::move(row));
            }
            tensor.push_back(std::move(per_action));
        }
        hypotheses.push_back(std::move(tensor));
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
}

BamdpModel load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        MdpEnsemble ens;
        ens.num_states = j.at("num_states").get<Index>();
        ens.num_actions = j.at("num_actions").get<Index>();
        ens.horizon = j.at("horizon").get<int>();
        ens.reward = Matrix::Zero(ens.num_states, ens.num_actions);
        const auto& reward = j.at("reward");
        for (Index s = 0; s < ens.num_states; ++s) {
            for (Index a = 0; a < ens.num_actions; ++a) {
                ens.reward(s, a) = reward.at(s).at(a).get<double>();
            }
        }
        ens.initial_dist = Vector::Zero(ens.num_states);
        for (Index s = 0; s < ens.num_states; ++s) {
            ens.initial_dist(s) = j.at("initial_dist").at(s).get<double>();
        }
        const auto& hypotheses = j.at("hypotheses");
        for (const auto& tensor : hypotheses) {
            std::vector<Matrix> t(static_cast<std::size_t>(ens.num_actions),
                                  Matrix::Zero(ens.num_states, ens.num_states));
            for (Index s = 0; s < ens.num_states; ++s) {
                for (Index a = 0; a < ens.num_actions; ++a) {
                    for (Index s2 = 0; s2 < ens.num_states; ++s2) {
                        t[static_cast<std::size_t>(a)](s, s2) =
                            tensor.at(s).at(a).at(s2).get<double>();
                    }
                }
            }
            ens.hypotheses.push_back(std::move(t));
        }
        Vector prior = Vector::Zero(static_cast<Index>(j.at("prior").size()));
        for (Index k = 0; k < prior.size(); ++k) prior(k) = j.at("prior").at(k).get<double>();

        ens.validate();
        BamdpModel model{std::move(ens), EpistemicState(std::move(prior)), nullptr};
        model.validate();
        return model;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace bamdp
