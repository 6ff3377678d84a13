#include "qoffload/report_json.hpp"

#include "json.hpp"

namespace qoffload {

using nlohmann::json;

namespace {

std::int64_t micros(std::chrono::nanoseconds d) {
    return std::chrono::duration_cast<std::chrono::microseconds>(d).count();
}

template <class F>
auto decoding(F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw Error(Errc::MalformedMessage, std::string("invalid report JSON: ") + e.what());
    }
}

}  // namespace

std::string job_result_to_json(const JobResult& r, Seed seed) {
    json j{{"device", r.device},
           {"num_qubits", r.histogram.num_qubits()},
           {"shots", r.histogram.shots()},
           {"seed", seed},
           {"counts", r.histogram.counts()},
           {"wall_time_us", micros(r.wall_time)}};
    return j.dump(2);
}

JobResult job_result_from_json(std::string_view text, Seed* seed) {
    return decoding([&] {
        const json j = json::parse(text);
        Histogram h(j.at("num_qubits").get<std::size_t>(), j.at("counts").get<std::vector<std::uint64_t>>());
        if (h.shots() != j.at("shots").get<std::uint64_t>()) {
            throw Error(Errc::MalformedMessage, "shots does not equal the sum of counts");
        }
        if (seed) *seed = j.at("seed").get<Seed>();
        JobResult r{std::move(h), std::chrono::microseconds(j.at("wall_time_us").get<std::int64_t>()),
                    j.at("device").get<std::string>()};
        return r;
    });
}

std::string vqe_report_to_json(const VqeReport& r) {
    std::vector<std::int64_t> trips;
    for (auto d : r.iteration_round_trips) trips.push_back(micros(d));
    json j{{"best_energy", r.best_energy},
           {"best_theta", r.best_theta},
           {"iterations", r.iterations},
           {"evaluations", r.evaluations},
           {"converged", r.converged},
           {"energy_trace", r.energy_trace},
           {"total_wall_time_us", micros(r.total_wall_time)},
           {"iteration_round_trip_us", trips},
           {"optimizer",
            {{"method", "nelder-mead"},
             {"reflection", r.optimizer.reflection},
             {"expansion", r.optimizer.expansion},
             {"contraction", r.optimizer.contraction},
             {"shrink", r.optimizer.shrink},
             {"initial_step", r.optimizer.initial_step},
             {"max_iterations", r.optimizer.max_iterations},
             {"tolerance", r.optimizer.tolerance}}},
           {"shots", r.shots},
           {"device", r.device},
           {"seed", r.seed}};
    return j.dump(2);
}

VqeReport vqe_report_from_json(std::string_view text) {
    return decoding([&] {
        const json j = json::parse(text);
        VqeReport r;
        r.best_energy = j.at("best_energy").get<double>();
        r.best_theta = j.at("best_theta").get<std::vector<double>>();
        r.iterations = j.at("iterations").get<std::size_t>();
        r.evaluations = j.at("evaluations").get<std::size_t>();
        r.converged = j.at("converged").get<bool>();
        r.energy_trace = j.at("energy_trace").get<std::vector<double>>();
        r.total_wall_time = std::chrono::microseconds(j.at("total_wall_time_us").get<std::int64_t>());
        for (auto us : j.at("iteration_round_trip_us").get<std::vector<std::int64_t>>()) {
            r.iteration_round_trips.emplace_back(std::chrono::microseconds(us));
        }
        const json& o = j.at("optimizer");
        r.optimizer.reflection = o.at("reflection").get<double>();
        r.optimizer.expansion = o.at("expansion").get<double>();
        r.optimizer.contraction = o.at("contraction").get<double>();
        r.optimizer.shrink = o.at("shrink").get<double>();
        r.optimizer.initial_step = o.at("initial_step").get<double>();
        r.optimizer.max_iterations = o.at("max_iterations").get<std::size_t>();
        r.optimizer.tolerance = o.at("tolerance").get<double>();
        r.shots = j.at("shots").get<std::uint64_t>();
        r.device = j.at("device").get<std::string>();
        r.seed = j.at("seed").get<Seed>();
        return r;
    });
}

}  // namespace qoffload
