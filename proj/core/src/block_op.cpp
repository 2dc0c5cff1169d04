#include "dipiir/block_op.hpp"

#include "dipiir/error.hpp"

namespace dipiir {

BlockIncompleteOp make_incomplete_op(const LinearOp& a_obs, const LinearOp& a_unobs) {
  if (a_obs.input_len() != a_unobs.input_len())
    throw ShapeError("make_incomplete_op: " + a_obs.label() + " and " + a_unobs.label() +
                     " act on images of different length");
  const Index ni = a_obs.input_len();
  const Index nd = a_unobs.output_len();
  const Index mo = a_obs.output_len();
  LinearOp composed(
      ni + nd, mo + nd,
      [a_obs, a_unobs, ni, nd, mo](const Vec& x) {
        Vec out(mo + nd);
        const Vec img = x.head(ni);
        out.head(mo) = a_obs.apply(img);
        out.tail(nd) = a_unobs.apply(img) - x.tail(nd);
        return out;
      },
      [a_obs, a_unobs, ni, nd, mo](const Vec& r) {
        Vec out(ni + nd);
        out.head(ni) = a_obs.adjoint(r.head(mo)) + a_unobs.adjoint(r.tail(nd));
        out.tail(nd) = -r.tail(nd);
        return out;
      },
      "[" + a_obs.label() + ",0;" + a_unobs.label() + ",-I]");
  return BlockIncompleteOp{a_obs, a_unobs, std::move(composed)};
}

}  // namespace dipiir
