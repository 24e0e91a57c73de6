const la = /(?=(ab))a(b)/;
const nb = /\bword\B/i;
module.exports = { la, nb };
