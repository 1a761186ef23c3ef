#pragma once

// Minimal reverse-mode autodiff over Eigen matrices. A Tape owns one forward
// pass; ops append nodes and backward() walks them in reverse. Tapes are
// single-use: build, run backward once, read gradients, discard.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "dialeval/common.hpp"

namespace dialeval::nn {

using Mat = Eigen::MatrixXd;

class Tape;

struct Var {
    Tape* tape = nullptr;
    int idx = -1;

    bool valid() const { return tape != nullptr; }
    const Mat& value() const;
    Eigen::Index rows() const { return value().rows(); }
    Eigen::Index cols() const { return value().cols(); }
    double scalar() const;
};

class Tape {
   public:
    // backward(tape, self): propagate grad(self) into the parents.
    using BackwardFn = std::function<void(Tape&, int)>;

    struct Node {
        Mat value;
        Mat grad;
        BackwardFn backward;
    };

    Var input(Mat v) { return make(std::move(v), nullptr); }

    Var make(Mat v, BackwardFn backward) {
        Node n;
        n.grad = Mat::Zero(v.rows(), v.cols());
        n.value = std::move(v);
        n.backward = std::move(backward);
        nodes_.push_back(std::move(n));
        return {this, static_cast<int>(nodes_.size()) - 1};
    }

    const Mat& value(int idx) const { return nodes_[idx].value; }
    Mat& grad(int idx) { return nodes_[idx].grad; }
    const Mat& grad(Var v) const { return nodes_[v.idx].grad; }

    void backward(Var loss) {
        if (loss.tape != this) throw ShapeError("backward on foreign tape");
        if (nodes_[loss.idx].value.size() != 1)
            throw ShapeError("backward requires a scalar loss");
        nodes_[loss.idx].grad(0, 0) = 1.0;
        for (int i = loss.idx; i >= 0; --i)
            if (nodes_[i].backward) nodes_[i].backward(*this, i);
    }

    size_t size() const { return nodes_.size(); }

   private:
    std::vector<Node> nodes_;
};

inline const Mat& Var::value() const { return tape->value(idx); }
inline double Var::scalar() const {
    if (value().size() != 1) throw ShapeError("scalar() on non 1x1 value");
    return value()(0, 0);
}

namespace tape_detail {
inline void same_tape(Var a, Var b) {
    if (a.tape != b.tape) throw ShapeError("operands live on different tapes");
}
inline void same_shape(Var a, Var b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeError(std::string(op) + ": shape mismatch");
}
}  // namespace tape_detail

inline Var add(Var a, Var b) {
    tape_detail::same_tape(a, b);
    tape_detail::same_shape(a, b, "add");
    int ia = a.idx, ib = b.idx;
    return a.tape->make(a.value() + b.value(), [ia, ib](Tape& t, int self) {
        t.grad(ia) += t.grad(self);
        t.grad(ib) += t.grad(self);
    });
}

inline Var sub(Var a, Var b) {
    tape_detail::same_tape(a, b);
    tape_detail::same_shape(a, b, "sub");
    int ia = a.idx, ib = b.idx;
    return a.tape->make(a.value() - b.value(), [ia, ib](Tape& t, int self) {
        t.grad(ia) += t.grad(self);
        t.grad(ib) -= t.grad(self);
    });
}

inline Var mul(Var a, Var b) {
    tape_detail::same_tape(a, b);
    tape_detail::same_shape(a, b, "mul");
    int ia = a.idx, ib = b.idx;
    return a.tape->make(a.value().cwiseProduct(b.value()), [ia, ib](Tape& t, int self) {
        t.grad(ia) += t.grad(self).cwiseProduct(t.value(ib));
        t.grad(ib) += t.grad(self).cwiseProduct(t.value(ia));
    });
}

inline Var div(Var a, Var b) {
    tape_detail::same_tape(a, b);
    tape_detail::same_shape(a, b, "div");
    int ia = a.idx, ib = b.idx;
    return a.tape->make(a.value().cwiseQuotient(b.value()), [ia, ib](Tape& t, int self) {
        t.grad(ia) += t.grad(self).cwiseQuotient(t.value(ib));
        t.grad(ib) -= t.grad(self)
                          .cwiseProduct(t.value(ia))
                          .cwiseQuotient(t.value(ib).cwiseProduct(t.value(ib)));
    });
}

inline Var scale(Var a, double s) {
    int ia = a.idx;
    return a.tape->make(a.value() * s,
                        [ia, s](Tape& t, int self) { t.grad(ia) += s * t.grad(self); });
}

inline Var add_scalar(Var a, double s) {
    int ia = a.idx;
    return a.tape->make(a.value().array() + s,
                        [ia](Tape& t, int self) { t.grad(ia) += t.grad(self); });
}

inline Var matmul(Var a, Var b) {
    tape_detail::same_tape(a, b);
    if (a.cols() != b.rows()) throw ShapeError("matmul: inner dimensions differ");
    int ia = a.idx, ib = b.idx;
    return a.tape->make(a.value() * b.value(), [ia, ib](Tape& t, int self) {
        t.grad(ia) += t.grad(self) * t.value(ib).transpose();
        t.grad(ib) += t.value(ia).transpose() * t.grad(self);
    });
}

inline Var transpose(Var a) {
    int ia = a.idx;
    return a.tape->make(a.value().transpose(),
                        [ia](Tape& t, int self) { t.grad(ia) += t.grad(self).transpose(); });
}

// a (n x d) plus a (1 x d) row replicated over every row
inline Var add_row_broadcast(Var a, Var row) {
    tape_detail::same_tape(a, row);
    if (row.rows() != 1 || row.cols() != a.cols())
        throw ShapeError("add_row_broadcast: row must be 1 x cols(a)");
    int ia = a.idx, ir = row.idx;
    Mat v = a.value();
    v.rowwise() += row.value().row(0);
    return a.tape->make(std::move(v), [ia, ir](Tape& t, int self) {
        t.grad(ia) += t.grad(self);
        t.grad(ir) += t.grad(self).colwise().sum();
    });
}

inline Var sigmoid(Var a) {
    int ia = a.idx;
    Mat v = (1.0 / (1.0 + (-a.value().array()).exp())).matrix();
    return a.tape->make(std::move(v), [ia](Tape& t, int self) {
        const Mat& y = t.value(self);
        t.grad(ia) += t.grad(self).cwiseProduct(
            (y.array() * (1.0 - y.array())).matrix());
    });
}

inline Var relu(Var a) {
    int ia = a.idx;
    return a.tape->make(a.value().cwiseMax(0.0), [ia](Tape& t, int self) {
        t.grad(ia) += t.grad(self).cwiseProduct(
            (t.value(ia).array() > 0.0).cast<double>().matrix());
    });
}

inline Var tanh_(Var a) {
    int ia = a.idx;
    return a.tape->make(a.value().array().tanh().matrix(), [ia](Tape& t, int self) {
        const Mat& y = t.value(self);
        t.grad(ia) += t.grad(self).cwiseProduct((1.0 - y.array().square()).matrix());
    });
}

inline Var exp_(Var a) {
    int ia = a.idx;
    return a.tape->make(a.value().array().exp().matrix(), [ia](Tape& t, int self) {
        t.grad(ia) += t.grad(self).cwiseProduct(t.value(self));
    });
}

inline Var log_(Var a) {
    int ia = a.idx;
    return a.tape->make(a.value().array().log().matrix(), [ia](Tape& t, int self) {
        t.grad(ia) += t.grad(self).cwiseQuotient(t.value(ia));
    });
}

inline Var sqrt_(Var a) {
    int ia = a.idx;
    return a.tape->make(a.value().array().sqrt().matrix(), [ia](Tape& t, int self) {
        t.grad(ia) += (t.grad(self).array() * 0.5 / t.value(self).array()).matrix();
    });
}

// gradient is passed through only strictly inside the interval
inline Var clamp(Var a, double lo, double hi) {
    int ia = a.idx;
    return a.tape->make(a.value().cwiseMax(lo).cwiseMin(hi), [ia, lo, hi](Tape& t, int self) {
        const auto& x = t.value(ia).array();
        Mat inside = ((x > lo) && (x < hi)).cast<double>().matrix();
        t.grad(ia) += t.grad(self).cwiseProduct(inside);
    });
}

// Row-wise softmax. Columns where valid_cols is false get probability 0 and
// receive no gradient. valid_cols empty means all columns are valid.
inline Var softmax_rows(Var a, const std::vector<bool>& valid_cols = {}) {
    if (!valid_cols.empty() && static_cast<Eigen::Index>(valid_cols.size()) != a.cols())
        throw ShapeError("softmax_rows: mask size must match columns");
    int ia = a.idx;
    const Mat& x = a.value();
    Mat y(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        double m = -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            if (valid_cols.empty() || valid_cols[j]) m = std::max(m, x(i, j));
        double z = 0.0;
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            if (valid_cols.empty() || valid_cols[j]) {
                y(i, j) = std::exp(x(i, j) - m);
                z += y(i, j);
            } else {
                y(i, j) = 0.0;
            }
        }
        y.row(i) /= z;
    }
    return a.tape->make(std::move(y), [ia](Tape& t, int self) {
        const Mat& y2 = t.value(self);
        const Mat& g = t.grad(self);
        for (Eigen::Index i = 0; i < y2.rows(); ++i) {
            double s = y2.row(i).dot(g.row(i));
            t.grad(ia).row(i) +=
                (y2.row(i).array() * (g.row(i).array() - s)).matrix();
        }
    });
}

// Mean over rows; rows where valid_rows is false are excluded.
inline Var mean_rows(Var a, const std::vector<bool>& valid_rows = {}) {
    if (!valid_rows.empty() && static_cast<Eigen::Index>(valid_rows.size()) != a.rows())
        throw ShapeError("mean_rows: mask size must match rows");
    int ia = a.idx;
    double n = 0;
    Mat sum = Mat::Zero(1, a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        if (valid_rows.empty() || valid_rows[i]) {
            sum += a.value().row(i);
            n += 1;
        }
    }
    if (n == 0) throw ShapeError("mean_rows: no valid rows");
    std::vector<bool> mask = valid_rows;
    return a.tape->make(sum / n, [ia, mask, n](Tape& t, int self) {
        for (Eigen::Index i = 0; i < t.value(ia).rows(); ++i)
            if (mask.empty() || mask[i]) t.grad(ia).row(i) += t.grad(self).row(0) / n;
    });
}

inline Var sum_all(Var a) {
    int ia = a.idx;
    Mat v(1, 1);
    v(0, 0) = a.value().sum();
    return a.tape->make(std::move(v), [ia](Tape& t, int self) {
        t.grad(ia).array() += t.grad(self)(0, 0);
    });
}

inline Var mean_all(Var a) { return scale(sum_all(a), 1.0 / static_cast<double>(a.value().size())); }

inline Var pick(Var a, Eigen::Index r, Eigen::Index c) {
    if (r >= a.rows() || c >= a.cols()) throw ShapeError("pick: index out of range");
    int ia = a.idx;
    Mat v(1, 1);
    v(0, 0) = a.value()(r, c);
    return a.tape->make(std::move(v), [ia, r, c](Tape& t, int self) {
        t.grad(ia)(r, c) += t.grad(self)(0, 0);
    });
}

// Row lookup with scatter-add backward; duplicate ids accumulate.
inline Var rows_gather(Var table, const std::vector<int>& ids) {
    int it = table.idx;
    Mat v(static_cast<Eigen::Index>(ids.size()), table.cols());
    for (size_t k = 0; k < ids.size(); ++k) {
        if (ids[k] < 0 || ids[k] >= table.rows()) throw ShapeError("rows_gather: id out of range");
        v.row(static_cast<Eigen::Index>(k)) = table.value().row(ids[k]);
    }
    return table.tape->make(std::move(v), [it, ids](Tape& t, int self) {
        for (size_t k = 0; k < ids.size(); ++k)
            t.grad(it).row(ids[k]) += t.grad(self).row(static_cast<Eigen::Index>(k));
    });
}

inline Var vstack(const std::vector<Var>& rows) {
    if (rows.empty()) throw ShapeError("vstack: empty");
    Tape* tape = rows[0].tape;
    Eigen::Index total = 0, cols = rows[0].cols();
    for (const Var& r : rows) {
        tape_detail::same_tape(rows[0], r);
        if (r.cols() != cols) throw ShapeError("vstack: column mismatch");
        total += r.rows();
    }
    Mat v(total, cols);
    std::vector<int> idxs;
    std::vector<Eigen::Index> heights;
    Eigen::Index at = 0;
    for (const Var& r : rows) {
        v.middleRows(at, r.rows()) = r.value();
        idxs.push_back(r.idx);
        heights.push_back(r.rows());
        at += r.rows();
    }
    return tape->make(std::move(v), [idxs, heights](Tape& t, int self) {
        Eigen::Index at2 = 0;
        for (size_t k = 0; k < idxs.size(); ++k) {
            t.grad(idxs[k]) += t.grad(self).middleRows(at2, heights[k]);
            at2 += heights[k];
        }
    });
}

inline Var hstack(const std::vector<Var>& cols) {
    if (cols.empty()) throw ShapeError("hstack: empty");
    Tape* tape = cols[0].tape;
    Eigen::Index total = 0, rows = cols[0].rows();
    for (const Var& c : cols) {
        tape_detail::same_tape(cols[0], c);
        if (c.rows() != rows) throw ShapeError("hstack: row mismatch");
        total += c.cols();
    }
    Mat v(rows, total);
    std::vector<int> idxs;
    std::vector<Eigen::Index> widths;
    Eigen::Index at = 0;
    for (const Var& c : cols) {
        v.middleCols(at, c.cols()) = c.value();
        idxs.push_back(c.idx);
        widths.push_back(c.cols());
        at += c.cols();
    }
    return tape->make(std::move(v), [idxs, widths](Tape& t, int self) {
        Eigen::Index at2 = 0;
        for (size_t k = 0; k < idxs.size(); ++k) {
            t.grad(idxs[k]) += t.grad(self).middleCols(at2, widths[k]);
            at2 += widths[k];
        }
    });
}

inline Var slice_cols(Var a, Eigen::Index start, Eigen::Index n) {
    if (start + n > a.cols()) throw ShapeError("slice_cols: out of range");
    int ia = a.idx;
    return a.tape->make(a.value().middleCols(start, n), [ia, start, n](Tape& t, int self) {
        t.grad(ia).middleCols(start, n) += t.grad(self);
    });
}

// Per-row layer normalization with learnable gain and bias (1 x d each).
inline Var layer_norm_rows(Var a, Var gamma, Var beta, double eps = 1e-5) {
    tape_detail::same_tape(a, gamma);
    tape_detail::same_tape(a, beta);
    if (gamma.rows() != 1 || gamma.cols() != a.cols() || beta.rows() != 1 ||
        beta.cols() != a.cols())
        throw ShapeError("layer_norm_rows: gamma/beta must be 1 x cols(a)");
    int ia = a.idx, ig = gamma.idx, ib = beta.idx;
    const Mat& x = a.value();
    Eigen::Index d = x.cols();
    Mat xhat(x.rows(), d);
    std::vector<double> inv_std(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        double mu = x.row(i).mean();
        double var = (x.row(i).array() - mu).square().mean();
        inv_std[i] = 1.0 / std::sqrt(var + eps);
        xhat.row(i) = (x.row(i).array() - mu) * inv_std[i];
    }
    Mat y = xhat;
    for (Eigen::Index i = 0; i < y.rows(); ++i)
        y.row(i) = y.row(i).cwiseProduct(gamma.value().row(0)) + beta.value().row(0);
    return a.tape->make(std::move(y), [ia, ig, ib, xhat, inv_std](Tape& t, int self) {
        const Mat& g = t.grad(self);
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
            t.grad(ib).row(0) += g.row(i);
            t.grad(ig).row(0) += g.row(i).cwiseProduct(xhat.row(i));
            Mat dxhat = g.row(i).cwiseProduct(t.value(ig).row(0));
            double m1 = dxhat.mean();
            double m2 = dxhat.cwiseProduct(xhat.row(i)).mean();
            t.grad(ia).row(i) +=
                inv_std[i] * (dxhat.array() - m1 - xhat.row(i).array() * m2).matrix();
        }
    });
}

// Cosine similarity of two 1 x d rows, as a 1 x 1 node.
inline Var cosine_similarity(Var a, Var b) {
    Var num = matmul(a, transpose(b));
    Var na = sqrt_(add_scalar(matmul(a, transpose(a)), 1e-12));
    Var nb = sqrt_(add_scalar(matmul(b, transpose(b)), 1e-12));
    return div(num, mul(na, nb));
}

}  // namespace dialeval::nn
