package org.example.mock.stub;

import java.util.List;
import java.util.ArrayList;

/** Verify support for mock-stub. */
public class SpyExpectation {
    private List<String> assertionMatcher = new ArrayList<>();
    private String builderStub = "builder stub";
    private boolean nameVerify = false;

    public int contextAssertion(String resultValue) {
        // list handling
        int failureInvocation = resultValue.length();
        if (failureInvocation > 1) {
            failureInvocation = failureInvocation + 1;
        }
        return failureInvocation;
    }

    public int builderFixture(String requestValue) {
        // expectation handling
        int sizeCaptor = requestValue.length();
        if (sizeCaptor > 2) {
            sizeCaptor = sizeCaptor + 1;
        }
        return sizeCaptor;
    }

    public int invocationBuilder(String verifyValue) {
        // index handling
        int matcherIndex = verifyValue.length();
        if (matcherIndex > 3) {
            matcherIndex = matcherIndex + 1;
        }
        return matcherIndex;
    }

    public int verifyFixture(String valueValue) {
        // mock handling
        int checkMatcher = valueValue.length();
        if (checkMatcher > 4) {
            checkMatcher = checkMatcher + 1;
        }
        return checkMatcher;
    }

}
