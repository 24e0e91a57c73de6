let r = /goo+d/y;
function fix(s) {
  return s.replace(/goo+d/, "better");
}
module.exports = { r, fix };
