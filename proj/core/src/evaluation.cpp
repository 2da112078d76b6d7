#include "lisible/evaluation.hpp"

#include "lisible/error.hpp"
#include "lisible/rng.hpp"
#include "lisible/text.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

namespace lisible {

const BwsTuple* BwsDesign::find(std::string_view tuple_id) const {
    for (const auto& t : tuples) {
        if (t.id == tuple_id) return &t;
    }
    return nullptr;
}

namespace {

bool contains(const std::vector<std::string>& v, std::string_view s) { return std::find(v.begin(), v.end(), s) != v.end(); }

std::unordered_map<std::string, const BwsTuple*> tuple_index(const BwsDesign& design) {
    std::unordered_map<std::string, const BwsTuple*> index;
    for (const auto& t : design.tuples) index.emplace(t.id, &t);
    return index;
}

void check_response(const BwsTuple* t, const BwsResponse& r) {
    if (!t) throw ValidationError("response references unknown tuple '" + r.tuple_id + "'");
    if (r.best == r.worst) throw ValidationError("best and worst must differ (tuple " + r.tuple_id + ")");
    if (!contains(t->texts, r.best) || !contains(t->texts, r.worst)) {
        throw ValidationError("best/worst must be members of tuple " + r.tuple_id);
    }
}

struct Tally {
    double seen = 0;
    double best = 0;
    double worst = 0;
};

std::map<std::string, double> scores_from(const std::unordered_map<std::string, const BwsTuple*>& index,
                                          const std::vector<const BwsResponse*>& responses) {
    std::map<std::string, Tally> tally;
    for (const BwsResponse* r : responses) {
        for (const auto& id : index.at(r->tuple_id)->texts) tally[id].seen += 1;
        tally[r->best].best += 1;
        tally[r->worst].worst += 1;
    }
    std::map<std::string, double> out;
    for (const auto& [id, t] : tally) out[id] = 100.0 * t.best / t.seen - 100.0 * t.worst / t.seen;
    return out;
}

std::string tuple_name(std::size_t i, std::size_t total) {
    const std::size_t width = std::max<std::size_t>(3, std::to_string(total).size());
    std::string n = std::to_string(i + 1);
    if (n.size() < width) n.insert(0, width - n.size(), '0');
    return "t" + n;
}

}  // namespace

BwsDesign generate_bws_design(const std::vector<std::string>& text_ids, std::size_t e, std::size_t k, std::size_t a,
                              std::uint64_t seed) {
    const std::size_t t_count = text_ids.size();
    if (e == 0 || k == 0 || a == 0) throw ParameterError("e, k and a must all be >= 1");
    if (k < 2) throw ParameterError("tuples need k >= 2 texts to pick a best and a worst");
    if (k > t_count) {
        throw ParameterError("infeasible design: k = " + std::to_string(k) + " exceeds the number of texts T = " +
                             std::to_string(t_count));
    }
    if ((t_count * e) % k != 0) {
        throw ParameterError("T*e must be divisible by k: " + std::to_string(t_count) + "*" + std::to_string(e) + " = " +
                             std::to_string(t_count * e) + " leaves remainder " + std::to_string((t_count * e) % k) +
                             " modulo " + std::to_string(k));
    }
    std::set<std::string> unique(text_ids.begin(), text_ids.end());
    if (unique.size() != t_count) throw ParameterError("text ids must be unique");

    const std::size_t n_tuples = t_count * e / k;
    Rng rng(seed);
    std::vector<std::size_t> remaining(t_count, e);
    std::vector<std::vector<std::size_t>> co(t_count, std::vector<std::size_t>(t_count, 0));
    std::vector<std::vector<std::size_t>> members(n_tuples);
    std::vector<std::size_t> order(t_count);
    std::iota(order.begin(), order.end(), 0);

    for (auto& tuple : members) {
        for (std::size_t slot = 0; slot < k; ++slot) {
            rng.shuffle(std::span(order));
            std::size_t best = t_count;
            std::size_t best_remaining = 0;
            std::size_t best_co = 0;
            for (std::size_t c : order) {
                if (remaining[c] == 0 || std::find(tuple.begin(), tuple.end(), c) != tuple.end()) continue;
                std::size_t cost = 0;
                for (std::size_t m : tuple) cost += co[c][m];
                if (best == t_count || remaining[c] > best_remaining ||
                    (remaining[c] == best_remaining && cost < best_co)) {
                    best = c;
                    best_remaining = remaining[c];
                    best_co = cost;
                }
            }
            if (best == t_count) {
                // Only texts already in the tuple remain; repair removes the duplicate.
                for (std::size_t c : order) {
                    if (remaining[c] > 0) {
                        best = c;
                        break;
                    }
                }
            }
            for (std::size_t m : tuple) {
                ++co[best][m];
                ++co[m][best];
            }
            --remaining[best];
            tuple.push_back(best);
        }
    }

    BwsDesign design;
    design.texts = text_ids;
    design.e = e;
    design.k = k;
    design.a = a;
    design.seed = seed;
    rng.shuffle(std::span(members));
    for (std::size_t i = 0; i < n_tuples; ++i) {
        rng.shuffle(std::span(members[i]));
        BwsTuple t;
        t.id = tuple_name(i, n_tuples);
        for (std::size_t m : members[i]) t.texts.push_back(text_ids[m]);
        t.slots = a;
        design.tuples.push_back(std::move(t));
    }
    repair_design(design, Rng::derive(seed, 1));
    validate_design(design);
    return design;
}

void repair_design(BwsDesign& design, std::uint64_t seed) {
    Rng rng(seed);
    auto has_dup = [](const std::vector<std::string>& v) {
        std::set<std::string> s(v.begin(), v.end());
        return s.size() != v.size();
    };
    const std::size_t n = design.tuples.size();
    for (std::size_t pass = 0; pass < 10 * n + 10; ++pass) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            auto& ti = design.tuples[i].texts;
            if (!has_dup(ti)) continue;
            // position p holds a repeated text
            std::size_t p = 0;
            for (std::size_t x = 1; x < ti.size(); ++x) {
                if (std::find(ti.begin(), ti.begin() + static_cast<std::ptrdiff_t>(x), ti[x]) !=
                    ti.begin() + static_cast<std::ptrdiff_t>(x)) {
                    p = x;
                    break;
                }
            }
            const std::size_t start = static_cast<std::size_t>(rng.below(n));
            for (std::size_t off = 0; off < n && has_dup(ti); ++off) {
                const std::size_t j = (start + off) % n;
                if (j == i) continue;
                auto& tj = design.tuples[j].texts;
                for (std::size_t q = 0; q < tj.size(); ++q) {
                    if (contains(ti, tj[q]) || contains(tj, ti[p])) continue;
                    std::swap(ti[p], tj[q]);
                    changed = true;
                    break;
                }
            }
        }
        if (!changed) break;
    }
}

void validate_design(const BwsDesign& design) {
    const std::size_t t_count = design.texts.size();
    if (design.k == 0 || design.tuples.size() * design.k != t_count * design.e) {
        throw StructureError("design has " + std::to_string(design.tuples.size()) + " tuples; expected T*e/k = " +
                             std::to_string(design.k == 0 ? 0 : t_count * design.e / design.k));
    }
    std::map<std::string, std::size_t> count;
    for (const auto& id : design.texts) count[id] = 0;
    if (count.size() != t_count) throw StructureError("design text ids are not unique");
    std::set<std::string> ids;
    for (const auto& t : design.tuples) {
        if (!ids.insert(t.id).second) throw StructureError("duplicate tuple id " + t.id);
        if (t.texts.size() != design.k) throw StructureError("tuple " + t.id + " does not have k texts");
        if (t.slots != design.a) throw StructureError("tuple " + t.id + " does not have a annotator slots");
        std::set<std::string> members(t.texts.begin(), t.texts.end());
        if (members.size() != t.texts.size()) throw StructureError("tuple " + t.id + " repeats a text");
        for (const auto& m : t.texts) {
            auto it = count.find(m);
            if (it == count.end()) throw StructureError("tuple " + t.id + " references unknown text " + m);
            ++it->second;
        }
    }
    for (const auto& [id, c] : count) {
        if (c != design.e) {
            throw StructureError("text " + id + " appears in " + std::to_string(c) + " tuples; expected " +
                                 std::to_string(design.e));
        }
    }
}

void validate_response(const BwsDesign& design, const BwsResponse& response) {
    check_response(design.find(response.tuple_id), response);
}

std::map<std::string, double> bws_scores(const BwsDesign& design, const std::vector<BwsResponse>& responses) {
    const auto index = tuple_index(design);
    std::vector<const BwsResponse*> ptrs;
    ptrs.reserve(responses.size());
    for (const auto& r : responses) {
        auto it = index.find(r.tuple_id);
        check_response(it == index.end() ? nullptr : it->second, r);
        ptrs.push_back(&r);
    }
    return scores_from(index, ptrs);
}

ShrResult split_half_reliability(const BwsDesign& design, const std::vector<BwsResponse>& responses,
                                 std::size_t iterations, std::uint64_t seed, const HalfPartitioner& partitioner) {
    if (iterations == 0) throw ParameterError("iterations must be >= 1");
    const auto index = tuple_index(design);
    for (const auto& r : responses) {
        auto it = index.find(r.tuple_id);
        check_response(it == index.end() ? nullptr : it->second, r);
    }
    ShrResult result;
    const std::size_t n = responses.size();
    if (!design.texts.empty()) {
        const double per_text = static_cast<double>(n * design.k) / static_cast<double>(design.texts.size());
        if (per_text < 2.0) {
            result.warnings.push_back("fewer than 2 judgments per text on average (" + text::format_fixed(per_text, 2) +
                                      ")");
        }
    }

    double sum = 0.0;
    std::vector<std::size_t> idx(n);
    for (std::size_t it = 0; it < iterations; ++it) {
        std::vector<bool> first;
        if (partitioner) {
            first = partitioner(n, it);
            if (first.size() != n) throw ParameterError("partitioner returned the wrong number of flags");
        } else {
            Rng rng(Rng::derive(seed, it));
            std::iota(idx.begin(), idx.end(), 0);
            rng.shuffle(std::span(idx));
            first.assign(n, false);
            const std::size_t half = n / 2;
            for (std::size_t i = 0; i < half; ++i) first[idx[i]] = true;
            if (n % 2 == 1 && rng.bernoulli(0.5)) first[idx[n - 1]] = true;
        }
        std::vector<const BwsResponse*> a;
        std::vector<const BwsResponse*> b;
        for (std::size_t i = 0; i < n; ++i) (first[i] ? a : b).push_back(&responses[i]);
        const auto sa = scores_from(index, a);
        const auto sb = scores_from(index, b);
        std::vector<double> xa;
        std::vector<double> xb;
        for (const auto& [id, v] : sa) {
            auto f = sb.find(id);
            if (f == sb.end()) continue;
            xa.push_back(v);
            xb.push_back(f->second);
        }
        if (xa.size() < 3) {
            ++result.iterations_skipped;
            continue;
        }
        try {
            sum += spearman(xa, xb);
            ++result.iterations_used;
        } catch (const DegenerateError&) {
            ++result.iterations_skipped;
        }
    }
    if (result.iterations_skipped > 0) {
        result.warnings.push_back(std::to_string(result.iterations_skipped) +
                                  " iterations skipped (fewer than 3 shared texts or constant scores)");
    }
    if (result.iterations_used == 0) throw DegenerateError("split-half reliability undefined: every iteration was skipped");
    result.shr = 100.0 * sum / static_cast<double>(result.iterations_used);
    return result;
}

std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t m = i; m <= j; ++m) ranks[order[m]] = r;
        i = j + 1;
    }
    return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ParameterError("spearman inputs differ in length");
    if (x.size() < 3) throw ParameterError("spearman needs at least 3 pairs");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw ValidationError("spearman inputs must be finite");
    }
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw DegenerateError("undefined correlation");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double icc2(const std::vector<std::vector<double>>& ratings) {
    const std::size_t n = ratings.size();
    if (n < 2) throw ValidationError("icc2 needs at least 2 targets");
    const std::size_t k = ratings[0].size();
    if (k < 2) throw ValidationError("icc2 needs at least 2 raters");
    for (std::size_t i = 0; i < n; ++i) {
        if (ratings[i].size() != k) throw ValidationError("missing rating: row " + std::to_string(i) + " is incomplete");
        for (std::size_t j = 0; j < k; ++j) {
            if (!std::isfinite(ratings[i][j])) {
                throw ValidationError("missing rating at target " + std::to_string(i) + ", rater " + std::to_string(j));
            }
        }
    }
    const auto nd = static_cast<double>(n);
    const auto kd = static_cast<double>(k);

    // Means are accumulated as offsets from a reference value so that equal
    // inputs yield bit-identical means.
    std::vector<double> row(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) s += ratings[i][j] - ratings[i][0];
        row[i] = ratings[i][0] + s / kd;
    }
    std::vector<double> col(k);
    for (std::size_t j = 0; j < k; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += ratings[i][j] - ratings[0][j];
        col[j] = ratings[0][j] + s / nd;
    }
    double gs = 0.0;
    for (std::size_t j = 0; j < k; ++j) gs += col[j] - col[0];
    const double grand = col[0] + gs / kd;

    double ssr = 0.0, ssc = 0.0, sse = 0.0, sst = 0.0;
    for (std::size_t i = 0; i < n; ++i) ssr += (row[i] - grand) * (row[i] - grand);
    ssr *= kd;
    for (std::size_t j = 0; j < k; ++j) ssc += (col[j] - grand) * (col[j] - grand);
    ssc *= nd;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double r = ratings[i][j] - row[i] - col[j] + grand;
            sse += r * r;
            sst += (ratings[i][j] - grand) * (ratings[i][j] - grand);
        }
    }
    if (sst == 0.0) throw DegenerateError("degenerate ratings");
    const double msr = ssr / (nd - 1.0);
    const double msc = ssc / (kd - 1.0);
    const double mse = sse / ((nd - 1.0) * (kd - 1.0));
    const double denom = msr + (kd - 1.0) * mse + kd * (msc - mse) / nd;
    if (denom == 0.0) throw DegenerateError("degenerate ratings");
    return (msr - mse) / denom;
}

RatingMatrix rating_matrix(const std::vector<RatingResponse>& responses) {
    RatingMatrix m;
    std::set<std::string> targets;
    std::set<std::string> raters;
    std::map<std::pair<std::string, std::string>, double> cells;
    for (const auto& r : responses) {
        if (!(r.rating >= 0.0 && r.rating <= 100.0)) {
            throw ValidationError("rating for " + r.text_id + " by " + r.rater + " is outside [0, 100]");
        }
        if (!cells.emplace(std::pair(r.text_id, r.rater), r.rating).second) {
            throw ValidationError("duplicate rating for " + r.text_id + " by " + r.rater);
        }
        targets.insert(r.text_id);
        raters.insert(r.rater);
    }
    m.targets.assign(targets.begin(), targets.end());
    m.raters.assign(raters.begin(), raters.end());
    for (const auto& t : m.targets) {
        std::vector<double> row;
        for (const auto& r : m.raters) {
            auto it = cells.find({t, r});
            if (it == cells.end()) throw ValidationError("missing rating for " + t + " by " + r);
            row.push_back(it->second);
        }
        m.values.push_back(std::move(row));
    }
    return m;
}

std::map<std::string, double> mean_ratings(const std::vector<RatingResponse>& responses) {
    std::map<std::string, std::pair<double, double>> acc;
    for (const auto& r : responses) {
        acc[r.text_id].first += r.rating;
        acc[r.text_id].second += 1.0;
    }
    std::map<std::string, double> out;
    for (const auto& [id, sn] : acc) out[id] = sn.first / sn.second;
    return out;
}

std::vector<ReportRow> correlation_report(const std::vector<std::pair<std::string, std::map<std::string, double>>>& scorers,
                                          const std::map<std::string, double>& human) {
    std::vector<ReportRow> rows;
    for (const auto& [name, scores] : scorers) {
        std::vector<double> x;
        std::vector<double> y;
        for (const auto& [id, h] : human) {
            auto it = scores.find(id);
            if (it == scores.end()) continue;
            x.push_back(it->second);
            y.push_back(h);
        }
        rows.push_back({name, 100.0 * spearman(x, y), x.size()});
    }
    return rows;
}

void write_report_tsv(std::ostream& out, const std::vector<ReportRow>& rows) {
    out << "scorer\trho\tn\n";
    for (const auto& r : rows) out << r.scorer << '\t' << text::format_fixed(r.rho, 2) << '\t' << r.n << '\n';
}

void write_report_table(std::ostream& out, const std::vector<ReportRow>& rows) {
    std::size_t width = 6;
    for (const auto& r : rows) width = std::max(width, r.scorer.size());
    auto pad = [](std::string s, std::size_t w, bool right) {
        if (s.size() >= w) return s;
        return right ? std::string(w - s.size(), ' ') + s : s + std::string(w - s.size(), ' ');
    };
    out << pad("Scorer", width, false) << "  " << pad("rho", 8, true) << "  " << pad("n", 6, true) << '\n';
    out << std::string(width, '-') << "  " << std::string(8, '-') << "  " << std::string(6, '-') << '\n';
    for (const auto& r : rows) {
        out << pad(r.scorer, width, false) << "  " << pad(text::format_fixed(r.rho, 2), 8, true) << "  "
            << pad(std::to_string(r.n), 6, true) << '\n';
    }
}

std::map<std::string, double> annotator_agreement(const BwsDesign& design, const std::vector<BwsResponse>& responses) {
    const auto index = tuple_index(design);
    for (const auto& r : responses) {
        auto it = index.find(r.tuple_id);
        check_response(it == index.end() ? nullptr : it->second, r);
    }
    std::set<std::string> annotators;
    for (const auto& r : responses) annotators.insert(r.annotator);
    std::map<std::string, double> out;
    for (const auto& who : annotators) {
        std::vector<const BwsResponse*> others;
        for (const auto& r : responses) {
            if (r.annotator != who) others.push_back(&r);
        }
        const auto consensus = scores_from(index, others);
        auto score_of = [&](const std::string& id) {
            auto it = consensus.find(id);
            return it == consensus.end() ? 0.0 : it->second;
        };
        double agree = 0.0;
        double total = 0.0;
        for (const auto& r : responses) {
            if (r.annotator != who) continue;
            const auto& members = index.at(r.tuple_id)->texts;
            double hi = -1e300;
            double lo = 1e300;
            for (const auto& m : members) {
                hi = std::max(hi, score_of(m));
                lo = std::min(lo, score_of(m));
            }
            if (score_of(r.best) == hi && score_of(r.worst) == lo) agree += 1.0;
            total += 1.0;
        }
        out[who] = total > 0 ? agree / total : 0.0;
    }
    return out;
}

}  // namespace lisible
