#include <gtest/gtest.h>

#include "valtrace/frontend/lexer.hpp"
#include "valtrace/frontend/parser.hpp"
#include "valtrace/frontend/printer.hpp"

namespace valtrace {
namespace {

std::vector<TokenKind> kinds(const std::vector<Token>& tokens) {
  std::vector<TokenKind> out;
  for (const auto& t : tokens) out.push_back(t.kind);
  return out;
}

TEST(Lexer, EmptySourceIsJustEof) {
  const auto tokens = tokenize("");
  ASSERT_EQ(tokens.size(), 1u);
  EXPECT_EQ(tokens[0].kind, TokenKind::Eof);
}

TEST(Lexer, SingleAssignment) {
  const auto tokens = tokenize("x = 1\n");
  EXPECT_EQ(kinds(tokens), (std::vector<TokenKind>{TokenKind::Identifier, TokenKind::Operator,
                                                   TokenKind::IntLiteral, TokenKind::Newline,
                                                   TokenKind::Eof}));
  EXPECT_EQ(tokens[0].lexeme, "x");
  EXPECT_EQ(tokens[1].lexeme, "=");
  EXPECT_EQ(tokens[2].lexeme, "1");
}

TEST(Lexer, IndentBeforeBodyAndDedentBeforeEof) {
  const auto tokens = tokenize("if a:\n    b = 2\n");
  const auto k = kinds(tokens);
  const auto indent = std::find(k.begin(), k.end(), TokenKind::Indent);
  ASSERT_NE(indent, k.end());
  EXPECT_EQ(tokens[indent - k.begin() + 1].lexeme, "b");
  ASSERT_GE(k.size(), 2u);
  EXPECT_EQ(k[k.size() - 2], TokenKind::Dedent);
  EXPECT_EQ(k.back(), TokenKind::Eof);
}

TEST(Lexer, IndentsAndDedentsBalance) {
  const auto tokens = tokenize(
      "def f(x):\n    if x:\n        return 1\n    else:\n        return 2\n\n# c\nf(1)\n");
  int depth = 0;
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::Indent) ++depth;
    if (t.kind == TokenKind::Dedent) --depth;
    EXPECT_GE(depth, 0);
  }
  EXPECT_EQ(depth, 0);
}

TEST(Lexer, CommentsAndBlankLinesDropped) {
  const auto tokens = tokenize("# heading\n\nx = 1  # trailing\n\n");
  EXPECT_EQ(tokens.size(), 5u);
}

TEST(Lexer, KeywordsAndLiterals) {
  const auto tokens = tokenize("while true and none: 2.5 \"s\\n\"\n");
  EXPECT_TRUE(tokens[0].is_keyword("while"));
  EXPECT_TRUE(tokens[1].is_keyword("true"));
  EXPECT_TRUE(tokens[2].is_keyword("and"));
  EXPECT_TRUE(tokens[3].is_keyword("none"));
  EXPECT_EQ(tokens[5].kind, TokenKind::FloatLiteral);
  EXPECT_EQ(tokens[6].kind, TokenKind::StringLiteral);
  EXPECT_EQ(tokens[6].lexeme, "s\n");
}

TEST(Lexer, SpansAreOneBased) {
  const auto tokens = tokenize("x = 1\n  \nyy = 2\n");
  EXPECT_EQ(tokens[0].span, (SourceSpan{1, 1, 1}));
  EXPECT_EQ(tokens[4].lexeme, "yy");
  EXPECT_EQ(tokens[4].span.line, 3);
  EXPECT_EQ(tokens[4].span.column, 1);
}

TEST(Lexer, Errors) {
  EXPECT_THROW(tokenize("x = $\n"), LexError);
  EXPECT_THROW(tokenize("s = \"open\n"), LexError);
  EXPECT_THROW(tokenize("s = \"bad \\q\"\n"), LexError);
  EXPECT_THROW(tokenize("if a:\n    b = 1\n  c = 2\n"), LexError);
  EXPECT_THROW(tokenize("if a:\n    b = 1\nif c:\n\td = 2\n"), LexError);
  EXPECT_THROW(tokenize("x = 9223372036854775808\n"), LexError);
  EXPECT_NO_THROW(tokenize("x = 9223372036854775807\n"));
}

TEST(Lexer, TabOnlyIndentationAccepted) {
  EXPECT_NO_THROW(tokenize("if a:\n\tb = 1\n\tif c:\n\t\td = 2\n"));
}

TEST(Lexer, ErrorCarriesPosition) {
  try {
    tokenize("x = 1\ny = @\n");
    FAIL() << "expected LexError";
  } catch (const LexError& e) {
    EXPECT_EQ(e.span().line, 2);
    EXPECT_EQ(e.span().column, 5);
  }
}

const AstNode& first_stmt(const Program& p) { return p.child(0); }

TEST(Parser, Precedence) {
  const Program p = parse_source("def f():\n    return 1 + 2 * 3\n");
  const AstNode& ret = first_stmt(p).child(0).child(0);
  ASSERT_EQ(ret.kind, NodeKind::Return);
  const AstNode& add = ret.child(0);
  EXPECT_EQ(add.kind, NodeKind::BinaryOp);
  EXPECT_EQ(add.text, "+");
  EXPECT_EQ(add.child(0).kind, NodeKind::Literal);
  EXPECT_EQ(add.child(1).kind, NodeKind::BinaryOp);
  EXPECT_EQ(add.child(1).text, "*");
}

TEST(Parser, PowerIsRightAssociativeAndBindsTighterThanUnaryMinus) {
  const Program chain = parse_source("2 ** 3 ** 2\n");
  EXPECT_EQ(print_expression(chain.child(0).child(0)), "(2 ** (3 ** 2))");
  EXPECT_EQ(chain.child(0).child(0).child(1).kind, NodeKind::BinaryOp);
  const Program neg = parse_source("-2 ** 2\n");
  const AstNode& e = neg.child(0).child(0);
  EXPECT_EQ(e.kind, NodeKind::UnaryOp);
  EXPECT_EQ(e.child(0).kind, NodeKind::BinaryOp);
}

TEST(Parser, MinimalFunction) {
  const Program p = parse_source("def f(x):\n    return x\n");
  ASSERT_EQ(p.kind, NodeKind::Module);
  const AstNode& def = first_stmt(p);
  EXPECT_EQ(def.kind, NodeKind::FunctionDef);
  EXPECT_EQ(def.text, "f");
  ASSERT_EQ(def.children.size(), 2u);
  EXPECT_EQ(def.child(0).kind, NodeKind::Identifier);
  EXPECT_EQ(def.child(0).text, "x");
  const AstNode& body = def.child(1);
  EXPECT_EQ(body.kind, NodeKind::Block);
  EXPECT_EQ(body.child(0).kind, NodeKind::Return);
  EXPECT_EQ(body.child(0).child(0).kind, NodeKind::Identifier);
}

TEST(Parser, ComprehensionIsNotALoop) {
  const Program p = parse_source("[x*x for x in lst]\n");
  const AstNode& e = first_stmt(p).child(0);
  EXPECT_EQ(e.kind, NodeKind::ListComprehension);
}

TEST(Parser, ComparisonsDoNotChain) {
  EXPECT_THROW(parse_source("a < b < c\n"), ParseError);
}

TEST(Parser, NegativeLiteralFolds) {
  const Program p = parse_source("-33\n");
  const AstNode& e = p.child(0).child(0);
  ASSERT_EQ(e.kind, NodeKind::Literal);
  EXPECT_EQ(std::get<std::int64_t>(e.literal), -33);
}

TEST(Parser, ElifChainAndTargets) {
  const Program p = parse_source(
      "if a:\n    x = 1\nelif b:\n    x[0] = 2\nelse:\n    x //= 3\n");
  EXPECT_EQ(first_stmt(p).kind, NodeKind::If);
  EXPECT_EQ(print_program(parse_source(print_program(p))), print_program(p));
}

TEST(Parser, Errors) {
  EXPECT_THROW(parse_source("x = \n"), ParseError);
  EXPECT_THROW(parse_source("def f(:\n    pass\n"), ParseError);
  EXPECT_THROW(parse_source("1 + 2 = x\n"), ParseError);
  EXPECT_THROW(parse_source("if x:\npass\n"), ParseError);
  EXPECT_THROW(parse_source("f(1\n"), ParseError);
  try {
    parse_source("x = )\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().line, 1);
    EXPECT_EQ(e.span().column, 5);
    EXPECT_FALSE(e.expected().empty());
    EXPECT_FALSE(e.found().empty());
  }
}

TEST(Printer, RoundTripPreservesStructure) {
  const char* sources[] = {
      "x = (1 + 2) * 3\n",
      "y = a - (b - c)\n",
      "z = not (a and b) or c\n",
      "s = \"q\\\"uote\\\\ \\t\\n\"\n",
      "w = [i for i in range(3) if i != 1]\n",
      "v = xs[1:] + xs[:2] + xs[1:2] + xs[-1]\n",
      "f = 1.0 + 1e-7 + 2.5e+300\n",
      "def g(a, b):\n    while a < b:\n        a += 1\n        if a == 3:\n            break\n"
      "        else:\n            continue\n    return\n",
  };
  for (const char* src : sources) {
    const Program p = parse_source(src);
    const Program q = parse_source(print_program(p));
    EXPECT_TRUE(structurally_equal(p, q)) << src << "\nprinted:\n" << print_program(p);
  }
}

TEST(Printer, FloatsRoundTripBitExactly) {
  for (double d : {0.1, 1.0 / 3.0, 1e300, 5e-324, 123456789.125}) {
    const std::string text = format_float(d);
    const Program p = parse_source("x = " + text + "\n");
    EXPECT_EQ(std::get<double>(p.child(0).child(1).literal), d) << text;
  }
}

}  // namespace
}  // namespace valtrace
