#include "datasim/simgen.hpp"

#include "datasim/distance.hpp"
#include "datasim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace datasim {

const char* to_string(DeviationFamily f) {
    switch (f) {
        case DeviationFamily::Null: return "null";
        case DeviationFamily::BinaryShift: return "binary";
        case DeviationFamily::Skewed: return "skewed";
        case DeviationFamily::OneUpOneDown: return "1up1down";
    }
    return "?";
}

const char* to_string(Grouping g) {
    switch (g) {
        case Grouping::ThreePlusOne: return "3+1";
        case Grouping::TwoPlusTwo: return "2+2";
        case Grouping::TwoPlusOnePlusOne: return "2+1+1";
        case Grouping::OnePlusOnePlusOnePlusOne: return "1+1+1+1";
    }
    return "?";
}

const char* to_string(OgmVariant v) {
    switch (v) {
        case OgmVariant::None: return "none";
        case OgmVariant::True: return "true";
        case OgmVariant::WrongSign: return "wrong-sign";
        case OgmVariant::WrongSize: return "wrong-size";
        case OgmVariant::WrongCoef: return "wrong-coef";
    }
    return "?";
}

const char* to_string(Balance b) {
    return b == Balance::Balanced ? "balanced" : "unbalanced";
}

DeviationFamily family_from_string(const std::string& s) {
    if (s == "null") return DeviationFamily::Null;
    if (s == "binary") return DeviationFamily::BinaryShift;
    if (s == "skewed") return DeviationFamily::Skewed;
    if (s == "1up1down") return DeviationFamily::OneUpOneDown;
    throw std::invalid_argument("unknown deviation family: " + s);
}

Grouping grouping_from_string(const std::string& s) {
    if (s == "3+1") return Grouping::ThreePlusOne;
    if (s == "2+2") return Grouping::TwoPlusTwo;
    if (s == "2+1+1") return Grouping::TwoPlusOnePlusOne;
    if (s == "1+1+1+1") return Grouping::OnePlusOnePlusOnePlusOne;
    throw std::invalid_argument("unknown grouping: " + s);
}

OgmVariant ogm_from_string(const std::string& s) {
    if (s == "none") return OgmVariant::None;
    if (s == "true") return OgmVariant::True;
    if (s == "wrong-sign") return OgmVariant::WrongSign;
    if (s == "wrong-size") return OgmVariant::WrongSize;
    if (s == "wrong-coef") return OgmVariant::WrongCoef;
    throw std::invalid_argument("unknown ogm variant: " + s);
}

Balance balance_from_string(const std::string& s) {
    if (s == "balanced") return Balance::Balanced;
    if (s == "unbalanced") return Balance::Unbalanced;
    throw std::invalid_argument("unknown balance: " + s);
}

std::vector<std::size_t> ScenarioSpec::sizes() const {
    std::vector<std::size_t> out;
    if (k == 2) {
        const double pi = balance == Balance::Balanced ? 0.5 : 0.2;
        const std::size_t n1 = static_cast<std::size_t>(std::llround(pi * static_cast<double>(total_n)));
        out = {n1, total_n - n1};
    } else {
        if (balance == Balance::Balanced) {
            const std::size_t q = total_n / 4;
            out = {q, q, q, total_n - 3 * q};
        } else {
            const auto share = [&](double f) {
                return static_cast<std::size_t>(std::llround(f * static_cast<double>(total_n)));
            };
            out = {share(0.1), share(0.2), share(0.3), 0};
            out[3] = total_n - out[0] - out[1] - out[2];
        }
    }
    return out;
}

void ScenarioSpec::validate() const {
    if (k != 2 && k != 4) throw std::invalid_argument("k must be 2 or 4");
    if (arity < 2) throw std::invalid_argument("arity must be >= 2");
    if (p < 1) throw std::invalid_argument("p must be >= 1");
    if (family == DeviationFamily::BinaryShift && arity != 2) {
        throw std::invalid_argument("binary deviation requires arity 2");
    }
    if ((family == DeviationFamily::Skewed || family == DeviationFamily::OneUpOneDown) && arity != 5) {
        throw std::invalid_argument("multinomial deviations require arity 5");
    }
    if (family != DeviationFamily::Null && delta <= 0.0) {
        throw std::invalid_argument("deviation requires delta > 0");
    }
    if (family == DeviationFamily::OneUpOneDown) {
        // Effective deltas grow with grouping offsets; the down-weight must stay positive.
        double max_delta = delta;
        if (k == 4) {
            if (grouping == Grouping::TwoPlusOnePlusOne) max_delta = delta + 0.1;
            if (grouping == Grouping::OnePlusOnePlusOnePlusOne) max_delta = delta + 0.2;
        }
        if (max_delta >= 1.0) {
            throw std::invalid_argument("one-up-one-down requires effective delta < 1");
        }
    }
    if (ogm != OgmVariant::None && k != 2) {
        throw std::invalid_argument("outcome models are defined for k=2 only");
    }
    for (std::size_t s : sizes()) {
        if (s < 1) throw std::invalid_argument("scenario produces an empty dataset");
    }
}

std::string ScenarioSpec::id() const {
    std::ostringstream ss;
    ss << "k" << k << "-n" << total_n << "-p" << p << "-c" << arity << "-" << to_string(balance)
       << "-" << to_string(family);
    if (family != DeviationFamily::Null) {
        ss << "-d" << delta;
    }
    if (k == 4) ss << "-g" << to_string(grouping);
    if (ogm != OgmVariant::None) ss << "-ogm-" << to_string(ogm);
    if (one_up_one_down_table_order) ss << "-tableorder";
    return ss.str();
}

std::uint64_t ScenarioSpec::hash() const {
    return hash_string(id());
}

namespace {

// 0-based index of each deviating dataset mapped to its deviation step:
// binary escalates multiplicatively (delta, 2*delta, 3*delta), the
// multinomial families additively (+0.1, +0.2), per the scenario tables and
// figure conventions.
double effective_delta(const ScenarioSpec& spec, std::size_t dataset_index) {
    if (spec.family == DeviationFamily::Null) return 0.0;
    if (spec.k == 2) {
        return dataset_index == 1 ? spec.delta : 0.0;
    }
    int step = 0;  // 0 = not deviating; 1,2,3 = escalation step
    switch (spec.grouping) {
        case Grouping::ThreePlusOne:
            step = dataset_index == 3 ? 1 : 0;
            break;
        case Grouping::TwoPlusTwo:
            step = dataset_index >= 2 ? 1 : 0;
            break;
        case Grouping::TwoPlusOnePlusOne:
            step = dataset_index == 2 ? 1 : dataset_index == 3 ? 2 : 0;
            break;
        case Grouping::OnePlusOnePlusOnePlusOne:
            step = dataset_index >= 1 ? static_cast<int>(dataset_index) : 0;
            break;
    }
    if (step == 0) return 0.0;
    if (spec.family == DeviationFamily::BinaryShift) {
        return static_cast<double>(step) * spec.delta;
    }
    return spec.delta + 0.1 * static_cast<double>(step - 1);
}

} // namespace

std::vector<double> WeightVector::probabilities() const {
    double total = 0.0;
    for (double w : weights) total += w;
    std::vector<double> p(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) p[i] = weights[i] / total;
    return p;
}

WeightVector weights_for(const ScenarioSpec& spec, std::size_t dataset_index) {
    spec.validate();
    WeightVector wv;
    wv.weights.assign(static_cast<std::size_t>(spec.arity), 1.0);
    const double d = effective_delta(spec, dataset_index);
    if (d <= 0.0) return wv;

    switch (spec.family) {
        case DeviationFamily::Null:
            break;
        case DeviationFamily::BinaryShift:
            wv.weights[1] = 1.0 + d;
            break;
        case DeviationFamily::Skewed:
            for (std::size_t c = 0; c < 5; ++c) {
                wv.weights[c] = 1.0 + static_cast<double>(c) * d;
            }
            break;
        case DeviationFamily::OneUpOneDown:
            if (spec.one_up_one_down_table_order) {
                wv.weights[3] = 1.0 - d;
                wv.weights[4] = 1.0 + d;
            } else {
                wv.weights[3] = 1.0 + d;
                wv.weights[4] = 1.0 - d;
            }
            break;
    }
    return wv;
}

std::vector<CategoricalDataset> generate(const ScenarioSpec& spec, std::uint64_t master_seed,
                                         std::uint64_t repetition) {
    spec.validate();
    const std::uint64_t scen = spec.hash();
    const std::vector<std::size_t> sizes = spec.sizes();

    std::vector<CategoricalDataset> out;
    out.reserve(sizes.size());
    for (std::size_t ds = 0; ds < sizes.size(); ++ds) {
        const std::vector<double> probs = weights_for(spec, ds).probabilities();
        std::vector<double> cdf(probs.size(), 0.0);
        double acc = 0.0;
        for (std::size_t c = 0; c < probs.size(); ++c) {
            acc += probs[c];
            cdf[c] = acc;
        }
        cdf.back() = 1.0;

        Rng rng(substream_seed(master_seed, scen, repetition, ds));
        const std::size_t n = sizes[ds];
        std::vector<Code> values(n * spec.p);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < spec.p; ++j) {
                const double u = rng.next_double();
                Code c = 0;
                while (u >= cdf[static_cast<std::size_t>(c)]) ++c;
                values[i * spec.p + j] = c;
            }
        }
        out.emplace_back(std::move(values), n, spec.p,
                         std::vector<Code>(spec.p, spec.arity));
    }
    if (spec.ogm != OgmVariant::None) {
        return attach_target(out, spec.ogm, master_seed, scen, repetition);
    }
    return out;
}

double ogm_eta(const std::vector<double>& dummy_row, OgmVariant variant, bool deviating_dataset) {
    const std::size_t w = dummy_row.size();
    if (w % 2 != 0) throw std::invalid_argument("dummy width must be even for the outcome model");
    const std::size_t half = w / 2;

    double intercept = -0.5;
    double first = 0.5, second = -0.5;
    if (deviating_dataset) {
        switch (variant) {
            case OgmVariant::None:
            case OgmVariant::True:
                break;
            case OgmVariant::WrongSign:
                first = -0.5;
                second = 0.5;
                break;
            case OgmVariant::WrongSize:
                first = 0.25;
                second = -0.25;
                break;
            case OgmVariant::WrongCoef:
                intercept = 1.0;
                first = 0.0;
                second = -2.0;
                break;
        }
    }
    double eta = intercept;
    for (std::size_t i = 0; i < half; ++i) eta += first * dummy_row[i];
    for (std::size_t i = half; i < w; ++i) eta += second * dummy_row[i];
    return eta;
}

std::vector<CategoricalDataset> attach_target(const std::vector<CategoricalDataset>& datasets,
                                              OgmVariant variant, std::uint64_t master_seed,
                                              std::uint64_t scenario_hash,
                                              std::uint64_t repetition) {
    if (variant == OgmVariant::None) return datasets;
    if (datasets.size() != 2) {
        throw std::invalid_argument("outcome models are defined for k=2 only");
    }
    std::vector<CategoricalDataset> out;
    out.reserve(datasets.size());
    for (std::size_t ds = 0; ds < datasets.size(); ++ds) {
        const CategoricalDataset& d = datasets[ds];
        if (d.dummy_width() % 2 != 0) {
            throw std::invalid_argument("dummy width must be even for the outcome model");
        }
        const std::vector<double> x = dummy_encode(d);
        const std::size_t w = d.dummy_width();
        Rng rng(substream_seed(master_seed, scenario_hash, repetition, 1000 + ds));
        std::vector<Code> target(d.rows());
        for (std::size_t i = 0; i < d.rows(); ++i) {
            const std::vector<double> row(x.begin() + static_cast<std::ptrdiff_t>(i * w),
                                          x.begin() + static_cast<std::ptrdiff_t>((i + 1) * w));
            const double eta = ogm_eta(row, variant, ds == 1);
            const double prob = 1.0 / (1.0 + std::exp(-eta));
            target[i] = rng.next_double() < prob ? 1 : 0;
        }
        out.push_back(d.with_target(std::move(target)));
    }
    return out;
}

} // namespace datasim
