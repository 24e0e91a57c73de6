const cls = /[a-z0-9_-]+(q)?/im;
module.exports = cls;
