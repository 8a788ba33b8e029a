// placeholder translation unit; implementation follows
namespace cqverify {}
