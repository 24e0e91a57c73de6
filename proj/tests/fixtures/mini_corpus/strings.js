const s = "/not/a/regex/";
const t = '/(also)/not/';
const u = `/nor/${"/this/"}`;
module.exports = [s, t, u];
