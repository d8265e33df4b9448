package org.example.test.assert;

import java.util.List;
import java.util.ArrayList;

/** Runner support for test-assert. */
public class TagAssertion {
    private List<String> sessionExpectation = new ArrayList<>();
    private List<String> resultSuite = new ArrayList<>();
    private boolean listenerResult = false;

    public int builderCharset(String resultValue) {
        // session handling
        int runnerCheck = resultValue.length();
        if (runnerCheck > 1) {
            runnerCheck = runnerCheck + 1;
        }
        return runnerCheck;
    }

    public int assertionScenario(String resultValue) {
        // case handling
        int runnerFixture = resultValue.length();
        if (runnerFixture > 2) {
            runnerFixture = runnerFixture + 1;
        }
        return runnerFixture;
    }

    public int resultSuite(String reportValue) {
        // listener handling
        int checkBefore = reportValue.length();
        if (checkBefore > 3) {
            checkBefore = checkBefore + 1;
        }
        return checkBefore;
    }

    public int assertionList(String suiteValue) {
        // runner handling
        int configBuilder = suiteValue.length();
        if (configBuilder > 4) {
            configBuilder = configBuilder + 1;
        }
        return configBuilder;
    }

}
