#pragma once

#include <map>
#include <string>
#include <vector>

#include "phk/cyclotomic.hpp"
#include "phk/polynomial.hpp"

namespace phk {

/// Labels for the embeddings of K into the coefficient field.
struct EmbeddingSet {
    std::vector<std::string> labels;

    std::size_t size() const { return labels.size(); }
    bool operator==(const EmbeddingSet& o) const { return labels == o.labels; }
    bool operator!=(const EmbeddingSet& o) const { return !(*this == o); }

    static EmbeddingSet standard(std::size_t degree) {
        EmbeddingSet e;
        for (std::size_t i = 0; i < degree; ++i) e.labels.push_back("eta" + std::to_string(i));
        return e;
    }
};

/// One monic polynomial per embedding, all of the same degree.
class EmbeddingPoly {
public:
    EmbeddingPoly() = default;
    EmbeddingPoly(EmbeddingSet embeddings, std::vector<Poly<Cyclotomic>> polys)
        : emb_(std::move(embeddings)), p_(std::move(polys)) {
        if (emb_.size() != p_.size())
            throw std::invalid_argument("EmbeddingPoly: one polynomial per embedding required");
        for (const auto& q : p_) {
            if (q.is_zero() || !(q.leading() == Cyclotomic(1)))
                throw std::invalid_argument("EmbeddingPoly: polynomials must be monic");
            if (q.degree() != p_.front().degree())
                throw std::invalid_argument("EmbeddingPoly: equal degree across embeddings required");
        }
    }

    static EmbeddingPoly from_roots(const EmbeddingSet& e,
                                    const std::vector<std::vector<Cyclotomic>>& roots) {
        std::vector<Poly<Cyclotomic>> ps;
        for (const auto& rs : roots) {
            Poly<Cyclotomic> p = Poly<Cyclotomic>::constant(Cyclotomic(1));
            for (const auto& r : rs)
                p = p * Poly<Cyclotomic>(std::vector<Cyclotomic>{Cyclotomic(0) - r, Cyclotomic(1)});
            ps.push_back(p);
        }
        return EmbeddingPoly(e, std::move(ps));
    }

    const EmbeddingSet& embeddings() const { return emb_; }
    long degree() const { return p_.empty() ? -1 : p_.front().degree(); }
    const Poly<Cyclotomic>& at(std::size_t i) const { return p_.at(i); }

    bool operator==(const EmbeddingPoly& o) const { return emb_ == o.emb_ && p_ == o.p_; }

    EmbeddingPoly multiplied(const EmbeddingPoly& o) const {
        if (emb_ != o.emb_) throw std::invalid_argument("EmbeddingPoly: embedding-set mismatch");
        std::vector<Poly<Cyclotomic>> ps;
        for (std::size_t i = 0; i < p_.size(); ++i) ps.push_back(p_[i] * o.p_[i]);
        return EmbeddingPoly(emb_, std::move(ps));
    }

private:
    EmbeddingSet emb_;
    std::vector<Poly<Cyclotomic>> p_;
};

/// S_eta(T - c_eta) per embedding; degree preserved.
inline EmbeddingPoly poly_shift(const EmbeddingPoly& s, const std::vector<Cyclotomic>& c) {
    if (c.size() != s.embeddings().size())
        throw std::invalid_argument("poly_shift: one shift per embedding required");
    std::vector<Poly<Cyclotomic>> ps;
    for (std::size_t i = 0; i < c.size(); ++i) ps.push_back(s.at(i).shift_var(Cyclotomic(0) - c[i]));
    return EmbeddingPoly(s.embeddings(), std::move(ps));
}

} // namespace phk
