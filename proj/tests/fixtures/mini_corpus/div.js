function ratio(b, c, d) {
  const a = b / c / d;
  return a;
}
module.exports = ratio;
