#include <stdexcept>
#include <string>

namespace bianchi {

// Finite presentations of SL2(O) for the five norm-Euclidean imaginary
// quadratic rings, on the generators
//   a = [[0,-1],[1,0]], t = [[1,1],[0,1]], u = [[1,w],[0,1]]
// plus a unit-diagonal generator l for d = 1, 3.  The relator sets lift the
// classical presentations of PSL2(O): each PSL2 relator is padded with the
// central word a^2 = -I where it evaluates to -I, and relators making a^2
// central are added.  Every relator below evaluates to the identity matrix
// exactly; builtin_presentation() re-checks this at load time.
std::string builtin_presentation_json(int d) {
  switch (d) {
    case 1:
      return R"json({
  "d": 1,
  "names": ["a", "t", "u", "l"],
  "generators": [
    ["0", "-1", "1", "0"],
    ["1", "1", "0", "1"],
    ["1", "w", "0", "1"],
    ["-w", "0", "0", "w"]
  ],
  "relators": [
    [1, 1, 1, 1],
    [4, 4, 1, 1],
    [1, 4, 1, 4, 1, 1],
    [2, 4, 2, 4, 1, 1],
    [3, 4, 3, 4, 1, 1],
    [1, 2, 1, 2, 1, 2, 1, 1],
    [3, 1, 4, 3, 1, 4, 3, 1, 4, 1, 1],
    [2, 3, -2, -3],
    [1, 1, 2, -1, -1, -2],
    [1, 1, 3, -1, -1, -3],
    [1, 1, 4, -1, -1, -4]
  ],
  "minus_identity": [1, 1],
  "roles": {"s": 1, "t": 2, "u": 3}
})json";
    case 2:
      return R"json({
  "d": 2,
  "names": ["a", "t", "u"],
  "generators": [
    ["0", "-1", "1", "0"],
    ["1", "1", "0", "1"],
    ["1", "w", "0", "1"]
  ],
  "relators": [
    [1, 1, 1, 1],
    [2, 1, 2, 1, 2, 1, 1, 1],
    [2, 3, -2, -3],
    [1, -3, 1, 3, 1, -3, 1, 3, 1, 1],
    [1, 1, 2, -1, -1, -2],
    [1, 1, 3, -1, -1, -3]
  ],
  "minus_identity": [1, 1],
  "roles": {"s": 1, "t": 2, "u": 3}
})json";
    case 3:
      return R"json({
  "d": 3,
  "names": ["a", "t", "u", "l"],
  "generators": [
    ["0", "-1", "1", "0"],
    ["1", "1", "0", "1"],
    ["1", "w", "0", "1"],
    ["1-w", "0", "0", "w"]
  ],
  "relators": [
    [1, 1, 1, 1],
    [4, 4, 4, 1, 1],
    [1, 4, 1, 4, 1, 1],
    [1, 2, 1, 2, 1, 2, 1, 1],
    [3, 1, 4, 3, 1, 4, 3, 1, 4, 1, 1],
    [2, 3, -2, -3],
    [4, 2, -4, 3],
    [4, 3, -4, 3, -2],
    [1, 1, 2, -1, -1, -2],
    [1, 1, 3, -1, -1, -3],
    [1, 1, 4, -1, -1, -4]
  ],
  "minus_identity": [1, 1],
  "roles": {"s": 1, "t": 2, "u": 3}
})json";
    case 7:
      return R"json({
  "d": 7,
  "names": ["a", "t", "u"],
  "generators": [
    ["0", "-1", "1", "0"],
    ["1", "1", "0", "1"],
    ["1", "w", "0", "1"]
  ],
  "relators": [
    [1, 1, 1, 1],
    [2, 1, 2, 1, 2, 1, 1, 1],
    [2, 3, -2, -3],
    [1, 2, -3, 1, 3, 1, 2, -3, 1, 3, 1, 1],
    [1, 1, 2, -1, -1, -2],
    [1, 1, 3, -1, -1, -3]
  ],
  "minus_identity": [1, 1],
  "roles": {"s": 1, "t": 2, "u": 3}
})json";
    case 11:
      return R"json({
  "d": 11,
  "names": ["a", "t", "u"],
  "generators": [
    ["0", "-1", "1", "0"],
    ["1", "1", "0", "1"],
    ["1", "w", "0", "1"]
  ],
  "relators": [
    [1, 1, 1, 1],
    [2, 1, 2, 1, 2, 1, 1, 1],
    [2, 3, -2, -3],
    [1, 2, -3, 1, 3, 1, 2, -3, 1, 3, 1, 2, -3, 1, 3, 1, 1],
    [1, 1, 2, -1, -1, -2],
    [1, 1, 3, -1, -1, -3]
  ],
  "minus_identity": [1, 1],
  "roles": {"s": 1, "t": 2, "u": 3}
})json";
    default:
      throw std::invalid_argument("no built-in presentation for d=" + std::to_string(d));
  }
}

}  // namespace bianchi
